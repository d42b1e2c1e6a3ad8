#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypoforge/agent/backend.hpp"
#include "hypoforge/kb/knowledge_base.hpp"

namespace hypoforge::agent {

enum class Architecture { kSingle, kDouble };

// What the extractor reads under the double architecture. The single
// architecture always hands it the shared log.
enum class ExtractorContext {
  kGenerationWithAssessments,  // generation log plus the evaluator's assessments
  kBothLogs,
};

struct AgentConfig {
  int max_outer_iterations = 3;
  int max_inner_iterations = 10;
  double evaluation_threshold = 50;
  int max_retries = 1;
  double temperature_react = 0.7;
  double temperature_extract = 0.2;
  Architecture architecture = Architecture::kSingle;
  ExtractorContext extractor_context = ExtractorContext::kGenerationWithAssessments;
  kb::Orientation novelty_orientation = kb::Orientation::kDirected;
  RetryPolicy retry;
  // Empty means every registered tool.
  std::vector<std::string> tools;

  // Throws Error(kConfig) naming the first offending field.
  void validate() const;
};

std::string_view to_string(Architecture a);
std::string_view to_string(ExtractorContext c);

// Reads the keys present in `j` over `base`; unknown keys are rejected.
AgentConfig config_from_json(const nlohmann::json& j, AgentConfig base = {});
nlohmann::json to_json(const AgentConfig& c);

}  // namespace hypoforge::agent
