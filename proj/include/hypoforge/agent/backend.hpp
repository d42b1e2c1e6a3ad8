#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypoforge/agent/action.hpp"

namespace hypoforge::agent {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

// Where in an episode a completion is requested. Live backends ignore it;
// the scripted backend matches on it.
struct TurnContext {
  Module module = Module::kGeneration;
  std::optional<int> outer;
  std::optional<int> inner;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  TurnContext context;
};

// Implementations must be safe to call from concurrent episodes. Transport
// failures throw Error(kBackend), which callers may retry.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string complete(const ChatRequest& request) const = 0;
};

// Replays canned responses. Rules are tried in order and the first whose
// non-null match fields all agree wins; `contains` is a substring test over
// the concatenated message contents. An unmatched turn throws
// Error(kContract), which is never retried.
class ScriptedBackend final : public ChatBackend {
 public:
  struct Rule {
    std::optional<Module> module;
    std::optional<int> outer;
    std::optional<int> inner;
    std::optional<std::string> contains;
    std::string response;
  };

  ScriptedBackend() = default;
  explicit ScriptedBackend(std::vector<Rule> rules) : rules_(std::move(rules)) {}

  // JSONL: {"match": {"module", "outer", "inner", "contains"}, "response"}.
  static ScriptedBackend load(std::istream& in);
  static ScriptedBackend load_file(const std::filesystem::path& path);

  std::string complete(const ChatRequest& request) const override;
  const std::vector<Rule>& rules() const { return rules_; }

 private:
  std::vector<Rule> rules_;
};

// OpenAI-compatible chat completions over HTTP(S). `base_url` is e.g.
// "https://api.openai.com/v1"; requests go to base_url + "/chat/completions".
class HttpChatBackend final : public ChatBackend {
 public:
  HttpChatBackend(std::string base_url, std::string model, std::string api_key,
                  std::chrono::seconds timeout = std::chrono::seconds(120));

  std::string complete(const ChatRequest& request) const override;

 private:
  std::string base_url_;
  std::string model_;
  std::string api_key_;
  std::chrono::seconds timeout_;
};

struct RetryPolicy {
  int retries = 2;
  std::chrono::milliseconds base_delay{500};
};

// Calls the backend, retrying Error(kBackend) failures with exponential delay.
std::string complete_with_retry(const ChatBackend& backend, const ChatRequest& request,
                                const RetryPolicy& policy);

std::optional<Module> parse_module(std::string_view text);

}  // namespace hypoforge::agent
