#include <httplib.h>

#include <nlohmann/json.hpp>

#include "hypoforge/agent/backend.hpp"
#include "hypoforge/error.hpp"

namespace hypoforge::agent {

using nlohmann::json;

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // without trailing slash
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kConfig, "endpoint must start with http:// or https://: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path_start);
  out.path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

}  // namespace

HttpChatBackend::HttpChatBackend(std::string base_url, std::string model, std::string api_key,
                                 std::chrono::seconds timeout)
    : base_url_(std::move(base_url)),
      model_(std::move(model)),
      api_key_(std::move(api_key)),
      timeout_(timeout) {
  split_url(base_url_);
}

std::string HttpChatBackend::complete(const ChatRequest& request) const {
  const auto url = split_url(base_url_);
  // A client per call keeps concurrent episodes independent.
  httplib::Client client(url.origin);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  client.set_connection_timeout(std::chrono::seconds(30));
  if (!api_key_.empty()) client.set_bearer_token_auth(api_key_);

  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  json body{{"model", model_}, {"messages", std::move(messages)},
            {"temperature", request.temperature}};

  auto res = client.Post(url.path + "/chat/completions", body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kBackend,
                "chat request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kBackend, "chat endpoint returned HTTP " +
                                         std::to_string(res->status) + ": " + res->body);
  }
  json reply = json::parse(res->body, nullptr, false);
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kBackend, "unexpected chat completion payload");
  }
}

}  // namespace hypoforge::agent
