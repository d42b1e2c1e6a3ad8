#include "hypoforge/service/service.hpp"

#include <httplib.h>

#include "hypoforge/error.hpp"
#include "hypoforge/query/json.hpp"

namespace hypoforge::service {

using nlohmann::json;

namespace {

template <typename Items>
json listing(const Items& items) {
  json arr = json::array();
  for (const auto& item : items) arr.push_back(query::to_json(item));
  return json{{"items", std::move(arr)}, {"count", items.size()}};
}

json error_body(ErrorCode code, const std::string& message) {
  return json{{"error", {{"code", error_code_name(code)}, {"message", message}}}};
}

const json& field(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) {
    throw Error(ErrorCode::kInvalidArgument, std::string("missing field '") + key + "'");
  }
  return body[key];
}

std::string string_field(const json& body, const char* key) {
  const auto& v = field(body, key);
  if (!v.is_string()) throw Error(ErrorCode::kInvalidArgument, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<kb::Pmid> pmid_list(const json& body) {
  const auto& v = field(body, "pmids");
  if (!v.is_array()) throw Error(ErrorCode::kInvalidFilter, "'pmids' must be an array");
  std::vector<kb::Pmid> out;
  for (const auto& p : v) {
    if (!p.is_number_integer() || p.get<long long>() <= 0) {
      throw Error(ErrorCode::kInvalidFilter, "pmids must be positive integers");
    }
    out.push_back(kb::Pmid{p.get<long long>()});
  }
  return out;
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidFilter:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
    case ErrorCode::kValidation:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    default:
      return 500;
  }
}

QueryService::QueryService(std::shared_ptr<const query::KnowledgeStore> store, std::size_t max_hops)
    : access_(std::move(store), max_hops) {}

Response QueryService::handle(const std::string& method, const std::string& path,
                              const std::map<std::string, std::string>& params,
                              const std::string& body) const {
  try {
    json parsed = json::object();
    if (method == "POST") {
      parsed = json::parse(body.empty() ? std::string("{}") : body, nullptr, false);
      if (parsed.is_discarded()) throw Error(ErrorCode::kParse, "request body is not valid JSON");
    }
    return {200, dispatch(method, path, params, parsed)};
  } catch (const Error& e) {
    return {http_status(e.code()), error_body(e.code(), e.what())};
  } catch (const std::exception& e) {
    return {500, error_body(ErrorCode::kContract, e.what())};
  }
}

json QueryService::dispatch(const std::string& method, const std::string& path,
                            const std::map<std::string, std::string>& params, const json& body) const {
  const auto route = method + " " + path;
  if (route == "GET /v1/health") return json{{"status", "ok"}};
  if (route == "POST /v1/entities") return listing(access_.get_entities(query::filter_from_json(body)));
  if (route == "POST /v1/relations") return listing(access_.get_relations(query::filter_from_json(body)));
  if (route == "POST /v1/triplets") return listing(access_.get_triplets(query::filter_from_json(body)));
  if (route == "POST /v1/articles") return listing(access_.get_articles(query::filter_from_json(body)));
  if (route == "POST /v1/articles/browse") {
    const auto result = access_.browse_articles(pmid_list(body));
    auto out = listing(result.articles);
    json missing = json::array();
    for (auto p : result.missing) missing.push_back(kb::to_int(p));
    out["missing"] = std::move(missing);
    return out;
  }
  if (route == "POST /v1/graph/shortest_paths") {
    std::size_t max_paths = 5;
    if (body.contains("max_paths")) {
      const auto& v = body["max_paths"];
      if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw Error(ErrorCode::kInvalidArgument, "'max_paths' must be a positive integer");
      }
      max_paths = v.get<std::size_t>();
    }
    return listing(access_.shortest_paths(string_field(body, "src"), string_field(body, "dst"), max_paths));
  }
  if (route == "POST /v1/entities/resolve") {
    return listing(std::vector<kb::Entity>{access_.resolve_entity(query::entity_ref_from_json(body))});
  }
  if (route == "POST /v1/entities/describe") {
    return listing(std::vector<query::EntityDescription>{
        access_.describe_entity(string_field(body, "entity_id"))});
  }
  if (route == "POST /v1/triplets/contains") {
    const auto rel = kb::parse_relation(string_field(body, "relation"));
    if (!rel) throw Error(ErrorCode::kInvalidArgument, "unknown relation");
    auto orientation = kb::Orientation::kDirected;
    if (body.contains("orientation")) {
      const auto o = string_field(body, "orientation");
      if (o == "undirected") orientation = kb::Orientation::kUndirected;
      else if (o != "directed") throw Error(ErrorCode::kInvalidArgument, "unknown orientation");
    }
    const kb::TripletKey key{string_field(body, "subject_id"), *rel, string_field(body, "object_id")};
    return json{{"contains", access_.contains(key, orientation)}};
  }
  if (method == "GET" && path.rfind("/v1/mesh/", 0) == 0) {
    const auto which = path.substr(9);
    query::MeshDirection dir;
    if (which == "parents") dir = query::MeshDirection::kParents;
    else if (which == "children") dir = query::MeshDirection::kChildren;
    else if (which == "siblings") dir = query::MeshDirection::kSiblings;
    else throw Error(ErrorCode::kNotFound, "no route " + route);
    auto it = params.find("entity_id");
    if (it == params.end() || it->second.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "missing query parameter 'entity_id'");
    }
    return listing(access_.mesh_neighbors(it->second, dir));
  }
  throw Error(ErrorCode::kNotFound, "no route " + route);
}

struct HttpServer::Impl {
  std::shared_ptr<const QueryService> service;
  httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<const QueryService> service) : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  auto handler = [svc = impl_->service](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> params;
    for (const auto& [k, v] : req.params) params.emplace(k, v);
    const auto out = svc->handle(req.method, req.path, params, req.body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) bound = 0;
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = 0;
  }
  if (bound <= 0) throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace hypoforge::service
