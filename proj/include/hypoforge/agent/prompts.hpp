#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hypoforge::agent {

enum class TemplateId {
  kGenerationSystem,
  kEvaluationSystem,
  kGenerationQuery,
  kEvaluationQuery,
  kForcedProposal,
  kForcedAssessment,
  kExtractorSystem,
  kExtractorQuery,
  kJudge,
  kJudgeRetry,
};

using PromptParams = std::map<std::string, std::string, std::less<>>;

std::string_view template_text(TemplateId id);

// Placeholder names ({identifier}) in order of first appearance.
std::vector<std::string> placeholders(std::string_view text);

// Replaces every {identifier} with its binding and leaves all other bytes
// untouched; literal JSON braces such as {"Relation": ...} are not
// placeholders. Throws Error(kTemplate) naming every unbound placeholder.
std::string render_template(std::string_view text, const PromptParams& params);
std::string render_prompt(TemplateId id, const PromptParams& params);

}  // namespace hypoforge::agent
