#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "hypoforge/error.hpp"
#include "hypoforge/query/access.hpp"
#include "hypoforge/query/store.hpp"

namespace hypoforge::service {

struct Response {
  int status = 200;
  nlohmann::json body;
};

// Transport-free request handling, so routing can be exercised without
// sockets. Successful list responses are {"items": [...], "count": n};
// failures are {"error": {"code", "message"}} with 400 for invalid filters
// and arguments, 404 for unknown entities/pmids/routes, 500 otherwise.
class QueryService {
 public:
  explicit QueryService(std::shared_ptr<const query::KnowledgeStore> store,
                        std::size_t max_hops = graph::kDefaultMaxHops);

  Response handle(const std::string& method, const std::string& path,
                  const std::map<std::string, std::string>& params, const std::string& body) const;

 private:
  nlohmann::json dispatch(const std::string& method, const std::string& path,
                          const std::map<std::string, std::string>& params,
                          const nlohmann::json& body) const;

  query::LocalAccess access_;
};

int http_status(ErrorCode code);

class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const QueryService> service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Error(kIo) on
  // bind failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  // Returns once a concurrent listen() accepts connections.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hypoforge::service
