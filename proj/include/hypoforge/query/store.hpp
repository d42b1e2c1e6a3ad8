#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hypoforge/graph/knowledge_graph.hpp"
#include "hypoforge/graph/mesh_tree.hpp"
#include "hypoforge/kb/knowledge_base.hpp"
#include "hypoforge/query/filter.hpp"
#include "hypoforge/query/text_index.hpp"

namespace hypoforge::query {

// Everything retrieval needs, built once over an immutable knowledge base:
// graph, MeSH tree, article and entity-name text indexes, and record
// postings by subject, object and pmid.
class KnowledgeStore {
 public:
  KnowledgeStore(kb::KnowledgeBase kb, graph::MeshTree mesh = {});

  // Loads a snapshot directory, including mesh.jsonl when present.
  static std::shared_ptr<const KnowledgeStore> open(const std::filesystem::path& snapshot);

  const kb::KnowledgeBase& kb() const { return kb_; }
  const graph::KnowledgeGraph& graph() const { return graph_; }
  const graph::MeshTree& mesh() const { return mesh_; }
  const TextIndex& article_index() const { return article_index_; }
  // Documents are ordinals into entity_order().
  const TextIndex& entity_index() const { return entity_index_; }
  const std::vector<const kb::Entity*>& entity_order() const { return entity_order_; }

  // Record indexes (into kb().records()) keyed by position.
  const std::vector<std::size_t>& records_with_subject(const std::string& id) const;
  const std::vector<std::size_t>& records_with_object(const std::string& id) const;
  const std::vector<std::size_t>& records_with_pmid(kb::Pmid pmid) const;

  // Catalog ids matched by a prototype, ascending.
  std::vector<std::string> resolve(const EntityRef& ref) const;
  std::set<std::string> resolve_all(const std::vector<EntityRef>& refs) const;

 private:
  kb::KnowledgeBase kb_;
  graph::MeshTree mesh_;
  graph::KnowledgeGraph graph_;
  TextIndex article_index_;
  TextIndex entity_index_;
  std::vector<const kb::Entity*> entity_order_;
  std::map<std::string, std::vector<const kb::Entity*>> by_lower_name_;
  std::map<std::string, std::vector<std::size_t>> by_subject_;
  std::map<std::string, std::vector<std::size_t>> by_object_;
  std::map<kb::Pmid, std::vector<std::size_t>> by_pmid_;
};

std::string lowercase(std::string_view s);

}  // namespace hypoforge::query
