#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hypoforge/kb/types.hpp"

namespace hypoforge::query {

struct ScoredEntity {
  kb::Entity entity;
  double score = 0.0;
};

struct RelationCount {
  kb::RelationType relation = kb::RelationType::kAssociate;
  std::size_t count = 0;
};

struct ScoredRecord {
  kb::HypothesisRecord record;
  double score = 0.0;
};

struct ScoredPmid {
  kb::Pmid pmid{};
  double score = 0.0;
};

struct BrowseResult {
  std::vector<kb::Article> articles;  // request order
  std::vector<kb::Pmid> missing;      // request order
};

struct PathNode {
  kb::Entity entity;
  std::optional<kb::RelationType> relation;
  bool reversed = false;
};

using PathResult = std::vector<PathNode>;

struct EntityDescription {
  kb::Entity entity;
  std::size_t as_subject = 0;
  std::size_t as_object = 0;
  std::vector<std::string> tree_numbers;
};

}  // namespace hypoforge::query
