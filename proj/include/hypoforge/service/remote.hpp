#pragma once

#include <chrono>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "hypoforge/query/access.hpp"

namespace hypoforge::service {

// KnowledgeAccess over the HTTP service. Error responses are turned back into
// Error with the code the server reported; transport failures raise kIo.
class RemoteAccess final : public query::KnowledgeAccess {
 public:
  // `base_url` such as "http://127.0.0.1:8080".
  explicit RemoteAccess(std::string base_url,
                        std::chrono::seconds timeout = std::chrono::seconds(30));
  ~RemoteAccess() override;

  bool healthy() const;

  std::vector<query::ScoredEntity> get_entities(const query::QueryFilter& f) const override;
  std::vector<query::RelationCount> get_relations(const query::QueryFilter& f) const override;
  std::vector<query::ScoredRecord> get_triplets(const query::QueryFilter& f) const override;
  std::vector<query::ScoredPmid> get_articles(const query::QueryFilter& f) const override;
  query::BrowseResult browse_articles(const std::vector<kb::Pmid>& pmids) const override;
  kb::Entity resolve_entity(const query::EntityRef& ref) const override;
  query::EntityDescription describe_entity(const std::string& entity_id) const override;
  std::vector<query::PathResult> shortest_paths(const std::string& src, const std::string& dst,
                                                std::size_t max_paths) const override;
  std::vector<kb::Entity> mesh_neighbors(const std::string& entity_id,
                                         query::MeshDirection direction) const override;
  bool contains(const kb::TripletKey& key, kb::Orientation orientation) const override;

 private:
  nlohmann::json post(const std::string& path, const nlohmann::json& body) const;
  nlohmann::json get(const std::string& path) const;

  std::string base_url_;
  std::chrono::seconds timeout_;
};

}  // namespace hypoforge::service
