#include <atomic>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "doctest.h"
#include "fixtures.hpp"
#include "hypoforge/agent/runtime.hpp"
#include "hypoforge/error.hpp"
#include "hypoforge/query/json.hpp"
#include "hypoforge/service/remote.hpp"
#include "hypoforge/service/service.hpp"
#include "random_filter.hpp"
#include "stores.hpp"

using namespace hypoforge;
using nlohmann::json;

namespace {

template <class T>
json dump(const std::vector<T>& items) {
  json out = json::array();
  for (const auto& x : items) out.push_back(query::to_json(x));
  return out;
}

// Runs an HttpServer on a free port for the lifetime of the object.
class LiveServer {
 public:
  explicit LiveServer(std::shared_ptr<const query::KnowledgeStore> store)
      : server_(std::make_shared<service::QueryService>(std::move(store))) {
    port_ = server_.bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_.listen(); });
    server_.wait_until_ready();
  }
  ~LiveServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  service::HttpServer server_;
  int port_ = 0;
  std::thread thread_;
};

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kContract;
}

}  // namespace

TEST_CASE("routes answer with listings and mapped status codes") {
  const service::QueryService svc(fixtures::desk_store());
  CHECK(svc.handle("GET", "/v1/health", {}, "").body == json{{"status", "ok"}});

  const auto rel = svc.handle("POST", "/v1/relations", {}, R"({"head_entities": [{"name": "metformin"}]})");
  CHECK(rel.status == 200);
  CHECK(rel.body["count"] == rel.body["items"].size());
  CHECK(rel.body["count"] == 3);

  const auto browse = svc.handle("POST", "/v1/articles/browse", {}, R"({"pmids": [101, 999]})");
  CHECK(browse.status == 200);
  CHECK(browse.body["count"] == 1);
  CHECK(browse.body["missing"] == json::array({999}));

  CHECK(svc.handle("POST", "/v1/triplets/contains", {},
                   R"({"subject_id": "MESH:D003924", "relation": "treat", "object_id": "MESH:D008687",
                       "orientation": "undirected"})")
            .body["contains"] == true);
  const auto kids = svc.handle("GET", "/v1/mesh/children", {{"entity_id", "MESH:D003920"}}, "");
  CHECK(kids.status == 200);
  CHECK(kids.body["count"].get<int>() >= 2);

  const auto paths = svc.handle("POST", "/v1/graph/shortest_paths", {},
                                R"({"src": "MESH:C000591245", "dst": "MESH:D003924"})");
  CHECK(paths.status == 200);
  CHECK(paths.body["count"].get<int>() >= 1);

  struct Case {
    std::string method, path, body;
    std::map<std::string, std::string> params;
    int status;
  };
  const std::vector<Case> errors = {
      {"POST", "/v1/triplets", "{}", {}, 400},
      {"POST", "/v1/entities", "not json", {}, 400},
      {"POST", "/v1/entities", R"({"limit": "ten"})", {}, 400},
      {"POST", "/v1/graph/shortest_paths", R"({"src": "MESH:D003924", "dst": "X"})", {}, 404},
      {"POST", "/v1/graph/shortest_paths", R"({"src": "a", "dst": "b", "max_paths": 0})", {}, 400},
      {"POST", "/v1/entities/describe", R"({"entity_id": "NOPE"})", {}, 404},
      {"POST", "/v1/triplets/contains", R"({"subject_id": "a", "relation": "heals", "object_id": "b"})", {}, 400},
      {"GET", "/v1/mesh/cousins", "", {{"entity_id", "MESH:D003920"}}, 404},
      {"GET", "/v1/mesh/parents", "", {}, 400},
      {"GET", "/v2/anything", "", {}, 404},
  };
  for (const auto& c : errors) {
    CAPTURE(c.path);
    CAPTURE(c.body);
    const auto r = svc.handle(c.method, c.path, c.params, c.body);
    CHECK(r.status == c.status);
    CHECK(r.body["error"]["code"].is_string());
    CHECK(r.body["error"]["message"].is_string());
  }
  CHECK(service::http_status(ErrorCode::kInvalidFilter) == 400);
  CHECK(service::http_status(ErrorCode::kNotFound) == 404);
  CHECK(service::http_status(ErrorCode::kIo) == 500);
}

TEST_CASE("remote access over HTTP matches local access") {
  const auto store = fixtures::desk_store();
  LiveServer server(store);
  const service::RemoteAccess remote(server.url());
  const query::LocalAccess local(store);
  REQUIRE(remote.healthy());

  fixtures::FilterGenerator gen(store->kb(), 99);
  for (int i = 0; i < 40; ++i) {
    const auto f = gen.next();
    CAPTURE(query::to_json(f).dump());
    auto both = [&](auto&& call) {
      std::optional<json> a, b;
      std::optional<ErrorCode> ea, eb;
      try {
        a = dump(call(local));
      } catch (const Error& e) {
        ea = e.code();
      }
      try {
        b = dump(call(remote));
      } catch (const Error& e) {
        eb = e.code();
      }
      CHECK(a == b);
      CHECK(ea == eb);
    };
    both([&](const query::KnowledgeAccess& x) { return x.get_entities(f); });
    both([&](const query::KnowledgeAccess& x) { return x.get_relations(f); });
    both([&](const query::KnowledgeAccess& x) { return x.get_triplets(f); });
    both([&](const query::KnowledgeAccess& x) { return x.get_articles(f); });
  }

  const std::vector<kb::Pmid> pmids{kb::Pmid{117}, kb::Pmid{5}, kb::Pmid{101}};
  const auto lb = local.browse_articles(pmids);
  const auto rb = remote.browse_articles(pmids);
  CHECK(dump(lb.articles) == dump(rb.articles));
  CHECK(lb.missing == rb.missing);

  CHECK(query::to_json(local.describe_entity("MESH:D003924")) == query::to_json(remote.describe_entity("MESH:D003924")));
  const query::EntityRef ref{std::nullopt, "tnf", std::nullopt};
  CHECK(query::to_json(local.resolve_entity(ref)) == query::to_json(remote.resolve_entity(ref)));
  CHECK(dump(local.shortest_paths("NCBI:7124", "MESH:D008687", 5)) ==
        dump(remote.shortest_paths("NCBI:7124", "MESH:D008687", 5)));
  for (auto d : {query::MeshDirection::kParents, query::MeshDirection::kChildren, query::MeshDirection::kSiblings}) {
    CHECK(dump(local.mesh_neighbors("MESH:D003924", d)) == dump(remote.mesh_neighbors("MESH:D003924", d)));
  }
  const kb::TripletKey key{"MESH:D003924", kb::RelationType::kTreat, "MESH:D008687"};
  for (auto o : {kb::Orientation::kDirected, kb::Orientation::kUndirected}) {
    CHECK(local.contains(key, o) == remote.contains(key, o));
  }

  CHECK(code_of([&] { remote.describe_entity("NOPE"); }) == ErrorCode::kNotFound);
  CHECK(code_of([&] { remote.get_triplets({}); }) == ErrorCode::kInvalidFilter);
}

TEST_CASE("episodes over the service equal in-process episodes") {
  const auto store = fixtures::desk_store();
  LiveServer server(store);
  const agent::ToolRegistry local(std::make_shared<query::LocalAccess>(store));
  const agent::ToolRegistry remote(std::make_shared<service::RemoteAccess>(server.url()));
  CHECK(local.api_description() == remote.api_description());

  const auto backend = agent::ScriptedBackend::load_file(fixtures::data("desk/replay.jsonl"));
  auto cfg = agent::config_from_json(
      json::parse(fixtures::slurp(fixtures::data("desk/run_config.json")))["agent"]);
  cfg.retry.base_delay = std::chrono::milliseconds(0);
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"MESH:C000591245", "MESH:D003924"}, {"NCBI:7124", "MESH:D003924"}, {"rs7903146", "MESH:D003922"}};
  for (const auto& [s, o] : pairs) {
    const agent::QueryCase q{"c", *store->kb().find_entity(s), *store->kb().find_entity(o)};
    auto trace = [&](const agent::ToolRegistry& tools) {
      agent::Episode ep(q, cfg, tools, backend);
      ep.run();
      std::ostringstream out;
      agent::write_trace(out, ep.memory(), ep.result());
      return out.str();
    };
    const auto a = trace(local);
    CHECK(a.find("\"ok\":true") != std::string::npos);
    CHECK(a == trace(remote));
  }
}

TEST_CASE("unreachable service surfaces as an io error") {
  const service::RemoteAccess remote("http://127.0.0.1:1", std::chrono::seconds(2));
  CHECK_FALSE(remote.healthy());
  CHECK(code_of([&] { remote.get_entities({}); }) == ErrorCode::kIo);
}

TEST_CASE("chat backend speaks the chat completions format") {
  httplib::Server fake;
  std::atomic<int> calls{0};
  json seen;
  std::string auth;
  fake.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    if (calls++ == 0) {
      res.status = 503;
      return;
    }
    seen = json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(json{{"choices", {{{"message", {{"role", "assistant"}, {"content", "hello"}}}}}}}.dump(),
                    "application/json");
  });
  const int port = fake.bind_to_any_port("127.0.0.1");
  std::thread t([&] { fake.listen_after_bind(); });
  fake.wait_until_ready();

  const agent::HttpChatBackend backend("http://127.0.0.1:" + std::to_string(port) + "/v1/", "m1", "k1");
  agent::ChatRequest req;
  req.messages = {{"system", "s"}, {"user", "u"}};
  req.temperature = 0.7;
  CHECK(code_of([&] { backend.complete(req); }) == ErrorCode::kBackend);
  CHECK(agent::complete_with_retry(backend, req, {1, std::chrono::milliseconds(0)}) == "hello");
  CHECK(seen["model"] == "m1");
  CHECK(seen["temperature"] == 0.7);
  CHECK(seen["messages"] == json::array({{{"role", "system"}, {"content", "s"}}, {{"role", "user"}, {"content", "u"}}}));
  CHECK(auth == "Bearer k1");
  fake.stop();
  t.join();
  CHECK_THROWS_AS(agent::HttpChatBackend("ftp:/x", "m", ""), Error);
}
