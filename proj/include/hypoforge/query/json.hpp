#pragma once

#include <nlohmann/json.hpp>

#include "hypoforge/query/filter.hpp"
#include "hypoforge/query/results.hpp"

// Canonical wire forms shared by the HTTP service and its client.
namespace hypoforge::query {

nlohmann::json to_json(const EntityRef& ref);
nlohmann::json to_json(const QueryFilter& filter);
nlohmann::json to_json(const ScoredEntity& e);
nlohmann::json to_json(const RelationCount& r);
nlohmann::json to_json(const ScoredRecord& r);
nlohmann::json to_json(const ScoredPmid& p);
nlohmann::json to_json(const kb::Article& a);
nlohmann::json to_json(const kb::Entity& e);
nlohmann::json to_json(const PathResult& path);
nlohmann::json to_json(const EntityDescription& d);

// Throw Error(kInvalidFilter) on malformed filters and Error(kParse) on
// malformed payloads.
EntityRef entity_ref_from_json(const nlohmann::json& j);
QueryFilter filter_from_json(const nlohmann::json& j);
kb::Entity entity_from_json(const nlohmann::json& j);
ScoredEntity scored_entity_from_json(const nlohmann::json& j);
RelationCount relation_count_from_json(const nlohmann::json& j);
ScoredRecord scored_record_from_json(const nlohmann::json& j);
ScoredPmid scored_pmid_from_json(const nlohmann::json& j);
kb::Article article_from_json(const nlohmann::json& j);
PathResult path_from_json(const nlohmann::json& j);
EntityDescription description_from_json(const nlohmann::json& j);

}  // namespace hypoforge::query
