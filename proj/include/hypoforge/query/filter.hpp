#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hypoforge/kb/types.hpp"

namespace hypoforge::query {

// Entity prototype as supplied by a caller: either a catalog id or a name
// (matched case-insensitively) optionally narrowed by type.
struct EntityRef {
  std::optional<std::string> id;
  std::string name;
  std::optional<kb::EntityType> type;

  bool operator==(const EntityRef&) const = default;
};

inline constexpr std::size_t kDefaultLimit = 20;

struct QueryFilter {
  std::vector<EntityRef> head_entities;
  std::vector<EntityRef> tail_entities;
  std::vector<kb::RelationType> relations;
  std::vector<kb::Pmid> pmids;
  std::string text_description;
  std::size_t limit = kDefaultLimit;

  bool has_head() const { return !head_entities.empty(); }
  bool has_tail() const { return !tail_entities.empty(); }
  bool has_relations() const { return !relations.empty(); }
  bool has_pmids() const { return !pmids.empty(); }
  bool has_text() const;
  bool empty() const {
    return !has_head() && !has_tail() && !has_relations() && !has_pmids() && !has_text();
  }
};

}  // namespace hypoforge::query
