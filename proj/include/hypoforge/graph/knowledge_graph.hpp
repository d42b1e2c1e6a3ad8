#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hypoforge/kb/knowledge_base.hpp"

namespace hypoforge::graph {

// One stored directed edge; `record` indexes KnowledgeBase::records().
struct Edge {
  std::uint32_t target = 0;
  kb::RelationType relation = kb::RelationType::kAssociate;
  std::size_t record = 0;
};

struct PathStep {
  std::string entity_id;
  // Relation of the edge used to arrive here; empty for the first step.
  std::optional<kb::RelationType> relation;
  // True when the stored edge points from this step back to the previous one.
  bool reversed = false;

  bool operator==(const PathStep&) const = default;
};

using EntityPath = std::vector<PathStep>;

inline constexpr std::size_t kUnlimitedHops = std::numeric_limits<std::size_t>::max();
inline constexpr std::size_t kDefaultMaxHops = 4;

// Directed labeled graph with one edge per knowledge-base record. Node
// indices follow ascending entity id, so index order is id order.
class KnowledgeGraph {
 public:
  static KnowledgeGraph build(const kb::KnowledgeBase& kb);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const std::vector<std::string>& node_ids() const { return ids_; }
  const std::string& id_of(std::uint32_t node) const { return ids_[node]; }
  std::optional<std::uint32_t> index_of(const std::string& id) const;

  const std::vector<Edge>& out_edges(std::uint32_t node) const { return out_[node]; }

  struct Neighbor {
    std::uint32_t node = 0;
    kb::RelationType relation = kb::RelationType::kAssociate;
    bool reversed = false;
  };
  // Undirected neighborhood sorted by node, one entry per neighbor. When
  // several edges join the pair, a forward edge wins over a reversed one,
  // then the relation with the smallest name.
  const std::vector<Neighbor>& neighbors(std::uint32_t node) const { return undirected_[node]; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::vector<Edge>> out_;
  std::vector<std::vector<Neighbor>> undirected_;
  std::size_t edge_count_ = 0;
};

// Hop distances from `src` treating edges as undirected; -1 marks unreachable.
std::vector<int> hop_distances(const KnowledgeGraph& g, std::uint32_t src,
                               std::size_t max_hops = kUnlimitedHops);

// All minimum-hop paths between two entities (edges undirected), at most
// `max_paths`, in lexicographic order of their node-id sequences. Throws
// Error(kNotFound) for unknown ids; returns empty when no path exists within
// `max_hops`.
std::vector<EntityPath> shortest_entity_paths(const KnowledgeGraph& g, const std::string& src,
                                              const std::string& dst, std::size_t max_paths,
                                              std::size_t max_hops = kDefaultMaxHops);

}  // namespace hypoforge::graph
