#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "hypoforge/kb/knowledge_base.hpp"
#include "hypoforge/query/filter.hpp"
#include "hypoforge/query/results.hpp"
#include "hypoforge/query/retrieval.hpp"
#include "hypoforge/query/store.hpp"

namespace hypoforge::query {

// The retrieval surface seen by agents. Implemented in-process over a
// KnowledgeStore and remotely over the HTTP service; both must produce
// identical results. Implementations are safe for concurrent callers.
class KnowledgeAccess {
 public:
  virtual ~KnowledgeAccess() = default;

  virtual std::vector<ScoredEntity> get_entities(const QueryFilter& filter) const = 0;
  virtual std::vector<RelationCount> get_relations(const QueryFilter& filter) const = 0;
  virtual std::vector<ScoredRecord> get_triplets(const QueryFilter& filter) const = 0;
  virtual std::vector<ScoredPmid> get_articles(const QueryFilter& filter) const = 0;
  virtual BrowseResult browse_articles(const std::vector<kb::Pmid>& pmids) const = 0;

  virtual kb::Entity resolve_entity(const EntityRef& ref) const = 0;
  virtual EntityDescription describe_entity(const std::string& entity_id) const = 0;
  virtual std::vector<PathResult> shortest_paths(const std::string& src_id,
                                                 const std::string& dst_id,
                                                 std::size_t max_paths) const = 0;
  virtual std::vector<kb::Entity> mesh_neighbors(const std::string& entity_id,
                                                 MeshDirection direction) const = 0;

  virtual bool contains(const kb::TripletKey& key, kb::Orientation orientation) const = 0;
};

class LocalAccess final : public KnowledgeAccess {
 public:
  explicit LocalAccess(std::shared_ptr<const KnowledgeStore> store,
                       std::size_t max_hops = graph::kDefaultMaxHops)
      : store_(std::move(store)), max_hops_(max_hops) {}

  const KnowledgeStore& store() const { return *store_; }

  std::vector<ScoredEntity> get_entities(const QueryFilter& f) const override {
    return query::get_entities(*store_, f);
  }
  std::vector<RelationCount> get_relations(const QueryFilter& f) const override {
    return query::get_relations(*store_, f);
  }
  std::vector<ScoredRecord> get_triplets(const QueryFilter& f) const override {
    return query::get_triplets(*store_, f);
  }
  std::vector<ScoredPmid> get_articles(const QueryFilter& f) const override {
    return query::get_articles(*store_, f);
  }
  BrowseResult browse_articles(const std::vector<kb::Pmid>& pmids) const override {
    return query::browse_articles(*store_, pmids);
  }
  kb::Entity resolve_entity(const EntityRef& ref) const override {
    return query::resolve_entity(*store_, ref);
  }
  EntityDescription describe_entity(const std::string& id) const override {
    return query::describe_entity(*store_, id);
  }
  std::vector<PathResult> shortest_paths(const std::string& src, const std::string& dst,
                                         std::size_t max_paths) const override {
    return query::shortest_paths(*store_, src, dst, max_paths, max_hops_);
  }
  std::vector<kb::Entity> mesh_neighbors(const std::string& id,
                                         MeshDirection direction) const override {
    return query::mesh_neighbors(*store_, id, direction);
  }
  bool contains(const kb::TripletKey& key, kb::Orientation orientation) const override {
    return kb::contains(store_->kb(), key, orientation);
  }

 private:
  std::shared_ptr<const KnowledgeStore> store_;
  std::size_t max_hops_;
};

}  // namespace hypoforge::query
