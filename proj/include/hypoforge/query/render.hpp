#pragma once

#include <string>
#include <vector>

#include "hypoforge/query/results.hpp"

// Plain-text observation layouts: one item per line, "rank. payload (score=...)".
namespace hypoforge::query {

std::string format_score(double score);

std::string render(const std::vector<ScoredEntity>& items);
std::string render(const std::vector<RelationCount>& items);
std::string render(const std::vector<ScoredRecord>& items);
std::string render(const std::vector<ScoredPmid>& items);
std::string render(const BrowseResult& result);
std::string render(const std::vector<PathResult>& paths);
std::string render(const std::vector<kb::Entity>& entities);
std::string render(const EntityDescription& description);

std::string entity_label(const kb::Entity& e);

}  // namespace hypoforge::query
