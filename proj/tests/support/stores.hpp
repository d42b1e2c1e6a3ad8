#pragma once

#include <memory>
#include <string>

#include "fixtures.hpp"
#include "hypoforge/kb/ingest.hpp"
#include "hypoforge/query/store.hpp"

namespace fixtures {

inline const hypoforge::kb::Date kCutoff{2024, 1, 1};

// Ingests data/fixtures/<name> (triplets, articles, mesh) at the 2024 cutoff.
inline std::shared_ptr<const hypoforge::query::KnowledgeStore> open_store(const std::string& name) {
  auto res = hypoforge::kb::ingest_files(data(name + "/triplets.jsonl"), data(name + "/articles.jsonl"), kCutoff);
  return std::make_shared<const hypoforge::query::KnowledgeStore>(
      std::move(res.kb), hypoforge::graph::MeshTree::load_file(data(name + "/mesh.jsonl")));
}

inline std::shared_ptr<const hypoforge::query::KnowledgeStore> desk_store() {
  static const auto store = open_store("desk");
  return store;
}

}  // namespace fixtures
