#include "hypoforge/graph/knowledge_graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "hypoforge/error.hpp"

namespace hypoforge::graph {

using kb::RelationType;

KnowledgeGraph KnowledgeGraph::build(const kb::KnowledgeBase& kb) {
  KnowledgeGraph g;
  std::set<std::string> ids;
  for (const auto& r : kb.records()) {
    ids.insert(r.triplet.subject.id);
    ids.insert(r.triplet.object.id);
  }
  g.ids_.assign(ids.begin(), ids.end());
  for (std::uint32_t i = 0; i < g.ids_.size(); ++i) g.index_.emplace(g.ids_[i], i);
  g.out_.resize(g.ids_.size());
  g.undirected_.resize(g.ids_.size());

  const auto& records = kb.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& t = records[i].triplet;
    const auto s = g.index_.at(t.subject.id);
    const auto o = g.index_.at(t.object.id);
    g.out_[s].push_back({o, t.relation, i});
    g.undirected_[s].push_back({o, t.relation, false});
    g.undirected_[o].push_back({s, t.relation, true});
  }
  g.edge_count_ = records.size();

  auto preferred = [](const Neighbor& a, const Neighbor& b) {
    if (a.node != b.node) return a.node < b.node;
    if (a.reversed != b.reversed) return !a.reversed;
    return kb::to_string(a.relation) < kb::to_string(b.relation);
  };
  for (auto& adj : g.undirected_) {
    std::sort(adj.begin(), adj.end(), preferred);
    adj.erase(std::unique(adj.begin(), adj.end(),
                          [](const Neighbor& a, const Neighbor& b) { return a.node == b.node; }),
              adj.end());
  }
  return g;
}

std::optional<std::uint32_t> KnowledgeGraph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> hop_distances(const KnowledgeGraph& g, std::uint32_t src, std::size_t max_hops) {
  std::vector<int> dist(g.node_count(), -1);
  std::deque<std::uint32_t> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    if (static_cast<std::size_t>(dist[u]) >= max_hops) continue;
    for (const auto& nb : g.neighbors(u)) {
      if (dist[nb.node] < 0) {
        dist[nb.node] = dist[u] + 1;
        queue.push_back(nb.node);
      }
    }
  }
  return dist;
}

namespace {

struct PathSearch {
  const KnowledgeGraph& g;
  const std::vector<int>& from_src;
  const std::vector<int>& to_dst;
  int length;
  std::size_t max_paths;
  std::vector<EntityPath>& out;
  EntityPath current;

  void visit(std::uint32_t u, int depth) {
    if (out.size() >= max_paths) return;
    if (depth == length) {
      out.push_back(current);
      return;
    }
    for (const auto& nb : g.neighbors(u)) {
      if (from_src[nb.node] != depth + 1 || to_dst[nb.node] != length - depth - 1) continue;
      current.push_back({g.id_of(nb.node), nb.relation, nb.reversed});
      visit(nb.node, depth + 1);
      current.pop_back();
      if (out.size() >= max_paths) return;
    }
  }
};

}  // namespace

std::vector<EntityPath> shortest_entity_paths(const KnowledgeGraph& g, const std::string& src,
                                              const std::string& dst, std::size_t max_paths,
                                              std::size_t max_hops) {
  const auto s = g.index_of(src);
  if (!s) throw Error(ErrorCode::kNotFound, "entity '" + src + "' is not in the graph");
  const auto d = g.index_of(dst);
  if (!d) throw Error(ErrorCode::kNotFound, "entity '" + dst + "' is not in the graph");
  if (max_paths == 0) throw Error(ErrorCode::kInvalidArgument, "max_paths must be at least 1");

  std::vector<EntityPath> out;
  if (*s == *d) {
    out.push_back({PathStep{src, std::nullopt, false}});
    return out;
  }
  const auto from_src = hop_distances(g, *s, max_hops);
  if (from_src[*d] < 0) return out;
  const auto to_dst = hop_distances(g, *d, max_hops);

  PathSearch search{g, from_src, to_dst, from_src[*d], max_paths, out, {}};
  search.current.push_back({src, std::nullopt, false});
  search.visit(*s, 0);
  return out;
}

}  // namespace hypoforge::graph
