#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hypoforge/query/filter.hpp"
#include "hypoforge/query/results.hpp"
#include "hypoforge/query/store.hpp"

namespace hypoforge::query {

// Name search over the catalog. Exact (case-insensitive) name matches come
// first, then descending name score, then ascending id. Entity prototypes
// restrict results to their types; without text the resolved prototypes are
// returned by id. Throws Error(kInvalidFilter) when neither is given.
std::vector<ScoredEntity> get_entities(const KnowledgeStore& store, const QueryFilter& filter);

// Relation frequencies over records matching the head (subject) and tail
// (object) constraints, by descending count then relation name.
std::vector<RelationCount> get_relations(const KnowledgeStore& store, const QueryFilter& filter);

// Records satisfying every provided constraint. With text, ranked by the best
// supporting-article score; otherwise by pmid count. Ties by identity key.
std::vector<ScoredRecord> get_triplets(const KnowledgeStore& store, const QueryFilter& filter);

// Pmids from the articles supporting matching records (or the whole catalog
// when no entity/relation constraint is given), intersected with `pmids`,
// ranked by text score when given, ties by ascending pmid.
std::vector<ScoredPmid> get_articles(const KnowledgeStore& store, const QueryFilter& filter);

// Throws Error(kInvalidFilter) for an empty request and Error(kNotFound)
// when no pmid is known.
BrowseResult browse_articles(const KnowledgeStore& store, const std::vector<kb::Pmid>& pmids);

// Single entity for a prototype: the lowest matching id. Throws kNotFound.
kb::Entity resolve_entity(const KnowledgeStore& store, const EntityRef& ref);

std::vector<PathResult> shortest_paths(const KnowledgeStore& store, const std::string& src_id,
                                       const std::string& dst_id, std::size_t max_paths,
                                       std::size_t max_hops);

enum class MeshDirection { kParents, kChildren, kSiblings };
std::vector<kb::Entity> mesh_neighbors(const KnowledgeStore& store, const std::string& entity_id,
                                       MeshDirection direction);

EntityDescription describe_entity(const KnowledgeStore& store, const std::string& entity_id);

}  // namespace hypoforge::query
