#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypoforge/agent/config.hpp"

namespace hypoforge::cli {

// Settings of the `run` command: a JSON file ({"agent": {...}, "parallelism",
// "replay", "endpoint", "model", "api_key_env", "service", "max_hops"})
// overridden by command-line flags.
struct RunConfig {
  std::filesystem::path kb;
  std::filesystem::path tests;
  std::filesystem::path out;
  std::optional<std::filesystem::path> replay;
  std::optional<std::string> endpoint;
  std::string model = "gpt-4o-mini";
  std::string api_key_env = "OPENAI_API_KEY";
  std::optional<std::string> service;  // query a running service instead of the snapshot
  std::size_t max_hops = 4;
  std::size_t parallelism = 1;
  agent::AgentConfig agent;

  // Throws Error(kConfig).
  void validate() const;
};

RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypoforge::cli
