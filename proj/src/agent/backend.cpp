#include "hypoforge/agent/backend.hpp"

#include <fstream>
#include <istream>
#include <thread>

#include <nlohmann/json.hpp>

#include "hypoforge/error.hpp"

namespace hypoforge::agent {

using nlohmann::json;

std::optional<Module> parse_module(std::string_view text) {
  for (auto m : {Module::kGeneration, Module::kEvaluation, Module::kExtractor, Module::kJudge}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

ScriptedBackend ScriptedBackend::load(std::istream& in) {
  std::vector<Rule> rules;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::kParse, "replay line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail("not a JSON object");
    if (!j.contains("response") || !j["response"].is_string()) fail("missing string 'response'");
    Rule r;
    r.response = j["response"].get<std::string>();
    if (j.contains("match") && !j["match"].is_null()) {
      const auto& m = j["match"];
      if (!m.is_object()) fail("'match' must be an object");
      if (m.contains("module") && !m["module"].is_null()) {
        if (!m["module"].is_string()) fail("'module' must be a string");
        r.module = parse_module(m["module"].get<std::string>());
        if (!r.module) fail("unknown module '" + m["module"].get<std::string>() + "'");
      }
      for (auto [key, slot] : {std::pair{"outer", &r.outer}, std::pair{"inner", &r.inner}}) {
        if (m.contains(key) && !m[key].is_null()) {
          if (!m[key].is_number_integer()) fail(std::string("'") + key + "' must be an integer");
          *slot = m[key].get<int>();
        }
      }
      if (m.contains("contains") && !m["contains"].is_null()) {
        if (!m["contains"].is_string()) fail("'contains' must be a string");
        r.contains = m["contains"].get<std::string>();
      }
    }
    rules.push_back(std::move(r));
  }
  return ScriptedBackend(std::move(rules));
}

ScriptedBackend ScriptedBackend::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open replay script " + path.string());
  return load(in);
}

std::string ScriptedBackend::complete(const ChatRequest& request) const {
  std::string haystack;
  for (const auto& m : request.messages) {
    haystack += m.content;
    haystack += '\n';
  }
  const auto& ctx = request.context;
  for (const auto& r : rules_) {
    if (r.module && *r.module != ctx.module) continue;
    if (r.outer && (!ctx.outer || *r.outer != *ctx.outer)) continue;
    if (r.inner && (!ctx.inner || *r.inner != *ctx.inner)) continue;
    if (r.contains && haystack.find(*r.contains) == std::string::npos) continue;
    return r.response;
  }
  auto idx = [](const std::optional<int>& v) { return v ? std::to_string(*v) : "null"; };
  throw Error(ErrorCode::kContract, "no scripted response for module=" +
                                        std::string(to_string(ctx.module)) +
                                        " outer=" + idx(ctx.outer) + " inner=" + idx(ctx.inner));
}

std::string complete_with_retry(const ChatBackend& backend, const ChatRequest& request,
                                const RetryPolicy& policy) {
  for (int attempt = 0;; ++attempt) {
    try {
      return backend.complete(request);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBackend || attempt >= policy.retries) throw;
    }
    std::this_thread::sleep_for(policy.base_delay * (1 << attempt));
  }
}

}  // namespace hypoforge::agent
