#include "hypoforge/service/remote.hpp"

#include <httplib.h>

#include "hypoforge/error.hpp"
#include "hypoforge/query/json.hpp"

namespace hypoforge::service {

using nlohmann::json;

namespace {

template <typename T, typename Fn>
std::vector<T> items_of(const json& body, Fn&& convert) {
  std::vector<T> out;
  for (const auto& item : body.at("items")) out.push_back(convert(item));
  return out;
}

json pmid_array(const std::vector<kb::Pmid>& pmids) {
  json a = json::array();
  for (auto p : pmids) a.push_back(kb::to_int(p));
  return a;
}

json checked(const httplib::Result& res, const std::string& path) {
  if (!res) {
    throw Error(ErrorCode::kIo, "request to " + path + " failed: " + httplib::to_string(res.error()));
  }
  auto body = json::parse(res->body, nullptr, false);
  if (body.is_discarded()) throw Error(ErrorCode::kParse, "non-JSON response from " + path);
  if (res->status != 200) {
    auto code = ErrorCode::kContract;
    std::string message = "HTTP " + std::to_string(res->status);
    if (body.contains("error")) {
      const auto& e = body["error"];
      if (auto c = parse_error_code(e.value("code", ""))) code = *c;
      message = e.value("message", message);
    }
    throw Error(code, message);
  }
  return body;
}

}  // namespace

RemoteAccess::RemoteAccess(std::string base_url, std::chrono::seconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

RemoteAccess::~RemoteAccess() = default;

// A client per request keeps concurrent episodes from serializing on one
// connection.
json RemoteAccess::post(const std::string& path, const json& body) const {
  httplib::Client client(base_url_);
  client.set_read_timeout(timeout_);
  return checked(client.Post(path, body.dump(), "application/json"), path);
}

json RemoteAccess::get(const std::string& path) const {
  httplib::Client client(base_url_);
  client.set_read_timeout(timeout_);
  return checked(client.Get(path), path);
}

bool RemoteAccess::healthy() const {
  try {
    return get("/v1/health").value("status", "") == "ok";
  } catch (const Error&) {
    return false;
  }
}

std::vector<query::ScoredEntity> RemoteAccess::get_entities(const query::QueryFilter& f) const {
  return items_of<query::ScoredEntity>(post("/v1/entities", query::to_json(f)),
                                       query::scored_entity_from_json);
}

std::vector<query::RelationCount> RemoteAccess::get_relations(const query::QueryFilter& f) const {
  return items_of<query::RelationCount>(post("/v1/relations", query::to_json(f)),
                                        query::relation_count_from_json);
}

std::vector<query::ScoredRecord> RemoteAccess::get_triplets(const query::QueryFilter& f) const {
  return items_of<query::ScoredRecord>(post("/v1/triplets", query::to_json(f)),
                                       query::scored_record_from_json);
}

std::vector<query::ScoredPmid> RemoteAccess::get_articles(const query::QueryFilter& f) const {
  return items_of<query::ScoredPmid>(post("/v1/articles", query::to_json(f)),
                                     query::scored_pmid_from_json);
}

query::BrowseResult RemoteAccess::browse_articles(const std::vector<kb::Pmid>& pmids) const {
  const auto body = post("/v1/articles/browse", json{{"pmids", pmid_array(pmids)}});
  query::BrowseResult out;
  out.articles = items_of<kb::Article>(body, query::article_from_json);
  for (const auto& p : body.at("missing")) out.missing.push_back(kb::Pmid{p.get<long long>()});
  return out;
}

kb::Entity RemoteAccess::resolve_entity(const query::EntityRef& ref) const {
  return query::entity_from_json(post("/v1/entities/resolve", query::to_json(ref)).at("items").at(0));
}

query::EntityDescription RemoteAccess::describe_entity(const std::string& entity_id) const {
  return query::description_from_json(
      post("/v1/entities/describe", json{{"entity_id", entity_id}}).at("items").at(0));
}

std::vector<query::PathResult> RemoteAccess::shortest_paths(const std::string& src, const std::string& dst,
                                                            std::size_t max_paths) const {
  return items_of<query::PathResult>(
      post("/v1/graph/shortest_paths", json{{"src", src}, {"dst", dst}, {"max_paths", max_paths}}),
      query::path_from_json);
}

std::vector<kb::Entity> RemoteAccess::mesh_neighbors(const std::string& entity_id,
                                                     query::MeshDirection direction) const {
  const char* which = direction == query::MeshDirection::kParents    ? "parents"
                      : direction == query::MeshDirection::kChildren ? "children"
                                                                     : "siblings";
  const auto path = std::string("/v1/mesh/") + which + "?entity_id=" +
                    httplib::detail::encode_query_param(entity_id);
  return items_of<kb::Entity>(get(path), query::entity_from_json);
}

bool RemoteAccess::contains(const kb::TripletKey& key, kb::Orientation orientation) const {
  const json body{{"subject_id", key.subject_id},
                  {"relation", kb::to_string(key.relation)},
                  {"object_id", key.object_id},
                  {"orientation", orientation == kb::Orientation::kDirected ? "directed" : "undirected"}};
  return post("/v1/triplets/contains", body).at("contains").get<bool>();
}

}  // namespace hypoforge::service
