#pragma once

#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypoforge/kb/ingest.hpp"

namespace fixtures {

// A random gene-gene graph pushed through ingest. Node i is "G%04d", so
// node index order equals id order.
struct RandomGraph {
  hypoforge::kb::KnowledgeBase kb;
  std::vector<std::vector<int>> adj;  // undirected, deduplicated
  std::set<std::tuple<int, std::string, int>> edges;  // directed (s, relation, o)
};

inline std::string gene_id(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "G%04d", i);
  return buf;
}

// Ingests one record per directed (s, relation, o) edge.
inline RandomGraph graph_from_edges(int nodes, std::set<std::tuple<int, std::string, int>> edges) {
  RandomGraph g;
  g.adj.assign(nodes, {});
  g.edges = std::move(edges);
  std::ostringstream triplets;
  std::set<std::pair<int, int>> seen;
  for (const auto& [s, r, o] : g.edges) {
    triplets << nlohmann::json{{"subject_id", gene_id(s)}, {"subject_name", "gene " + gene_id(s)},
                               {"subject_type", "gene"},   {"relation", r},
                               {"object_id", gene_id(o)},  {"object_name", "gene " + gene_id(o)},
                               {"object_type", "gene"},    {"pmids", {1}}}
                    .dump()
             << '\n';
    if (seen.insert({std::min(s, o), std::max(s, o)}).second) {
      g.adj[s].push_back(o);
      g.adj[o].push_back(s);
    }
  }
  std::istringstream t(triplets.str());
  std::istringstream a(R"({"pmid": 1, "title": "t", "abstract": "a", "pub_date": "2000", "journal": "J"})");
  g.kb = hypoforge::kb::ingest(t, a, hypoforge::kb::Date{2024, 1, 1}).kb;
  return g;
}

inline const char* random_relation(std::mt19937& rng) {
  static const char* kRelations[] = {"interact", "negative_correlate", "positive_correlate"};
  return kRelations[std::uniform_int_distribution<int>(0, 2)(rng)];
}

// `edges` draws without self loops; repeated draws collapse.
inline RandomGraph random_graph(std::mt19937& rng, int nodes, int edges) {
  std::set<std::tuple<int, std::string, int>> set;
  std::uniform_int_distribution<int> pick(0, nodes - 1);
  for (int e = 0; e < edges; ++e) {
    const int s = pick(rng), o = pick(rng);
    if (s == o) continue;
    set.insert({s, random_relation(rng), o});
  }
  return graph_from_edges(nodes, std::move(set));
}

// Exactly `records` distinct edges.
inline RandomGraph random_graph_with_records(std::mt19937& rng, int nodes, std::size_t records) {
  std::set<std::tuple<int, std::string, int>> set;
  std::uniform_int_distribution<int> pick(0, nodes - 1);
  while (set.size() < records) {
    const int s = pick(rng), o = pick(rng);
    if (s != o) set.insert({s, random_relation(rng), o});
  }
  return graph_from_edges(nodes, std::move(set));
}

}  // namespace fixtures
