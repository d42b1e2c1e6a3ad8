#include "hypoforge/agent/config.hpp"

#include "hypoforge/error.hpp"

namespace hypoforge::agent {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::kConfig, "invalid config '" + field + "': " + why);
}

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    bad(key, "wrong type");
  }
}

}  // namespace

std::string_view to_string(Architecture a) {
  return a == Architecture::kSingle ? "single" : "double";
}

std::string_view to_string(ExtractorContext c) {
  return c == ExtractorContext::kGenerationWithAssessments ? "generation" : "both";
}

void AgentConfig::validate() const {
  if (max_outer_iterations < 1) bad("max_outer_iterations", "must be >= 1");
  if (max_inner_iterations < 1) bad("max_inner_iterations", "must be >= 1");
  if (max_retries < 1) bad("max_retries", "must be >= 1");
  if (!(evaluation_threshold >= 0 && evaluation_threshold <= 100)) {
    bad("evaluation_threshold", "must be within 0..100");
  }
  if (!(temperature_react >= 0 && temperature_react <= 2)) {
    bad("temperature_react", "must be within 0..2");
  }
  if (!(temperature_extract >= 0 && temperature_extract <= 2)) {
    bad("temperature_extract", "must be within 0..2");
  }
  if (retry.retries < 0) bad("backend_retries", "must be >= 0");
  if (retry.base_delay.count() < 0) bad("backend_retry_delay_ms", "must be >= 0");
}

AgentConfig config_from_json(const json& j, AgentConfig c) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "agent config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "max_outer_iterations") {
      c.max_outer_iterations = get_as<int>(value, key);
    } else if (key == "max_inner_iterations") {
      c.max_inner_iterations = get_as<int>(value, key);
    } else if (key == "evaluation_threshold") {
      c.evaluation_threshold = get_as<double>(value, key);
    } else if (key == "max_retries") {
      c.max_retries = get_as<int>(value, key);
    } else if (key == "temperature_react") {
      c.temperature_react = get_as<double>(value, key);
    } else if (key == "temperature_extract") {
      c.temperature_extract = get_as<double>(value, key);
    } else if (key == "architecture") {
      const auto s = get_as<std::string>(value, key);
      if (s == "single") c.architecture = Architecture::kSingle;
      else if (s == "double") c.architecture = Architecture::kDouble;
      else bad(key, "expected 'single' or 'double'");
    } else if (key == "extractor_context") {
      const auto s = get_as<std::string>(value, key);
      if (s == "generation") c.extractor_context = ExtractorContext::kGenerationWithAssessments;
      else if (s == "both") c.extractor_context = ExtractorContext::kBothLogs;
      else bad(key, "expected 'generation' or 'both'");
    } else if (key == "novelty_orientation") {
      const auto s = get_as<std::string>(value, key);
      if (s == "directed") c.novelty_orientation = kb::Orientation::kDirected;
      else if (s == "undirected") c.novelty_orientation = kb::Orientation::kUndirected;
      else bad(key, "expected 'directed' or 'undirected'");
    } else if (key == "backend_retries") {
      c.retry.retries = get_as<int>(value, key);
    } else if (key == "backend_retry_delay_ms") {
      c.retry.base_delay = std::chrono::milliseconds(get_as<long>(value, key));
    } else if (key == "tools") {
      c.tools = get_as<std::vector<std::string>>(value, key);
    } else {
      bad(key, "unknown key");
    }
  }
  return c;
}

json to_json(const AgentConfig& c) {
  return json{
      {"max_outer_iterations", c.max_outer_iterations},
      {"max_inner_iterations", c.max_inner_iterations},
      {"evaluation_threshold", c.evaluation_threshold},
      {"max_retries", c.max_retries},
      {"temperature_react", c.temperature_react},
      {"temperature_extract", c.temperature_extract},
      {"architecture", to_string(c.architecture)},
      {"extractor_context", to_string(c.extractor_context)},
      {"novelty_orientation",
       c.novelty_orientation == kb::Orientation::kDirected ? "directed" : "undirected"},
      {"backend_retries", c.retry.retries},
      {"backend_retry_delay_ms", c.retry.base_delay.count()},
      {"tools", c.tools},
  };
}

}  // namespace hypoforge::agent
