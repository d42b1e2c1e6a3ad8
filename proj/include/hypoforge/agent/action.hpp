#pragma once

#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "hypoforge/kb/types.hpp"

namespace hypoforge::agent {

enum class Module { kGeneration, kEvaluation, kExtractor, kJudge };

std::string_view to_string(Module m);

// A parsed function call. Argument values use JSON as the value model:
// Python literals map to JSON scalars and arrays, dotted names such as
// Entity_Type.CHEMICAL become {"$name": "Entity_Type.CHEMICAL"}, and
// constructor expressions become {"$call": "Entity", "args": [...],
// "kwargs": {...}}.
struct ApiCall {
  std::string function;
  nlohmann::json positional = nlohmann::json::array();
  nlohmann::json keywords = nlohmann::json::object();

  bool operator==(const ApiCall&) const = default;
};

struct Propose {
  kb::RelationType relation = kb::RelationType::kTreat;
  std::string description;

  bool operator==(const Propose&) const = default;
};

struct Assess {
  bool is_new = false;
  std::string feedback;
  double score = 0.0;

  bool operator==(const Assess&) const = default;
};

using Action = std::variant<ApiCall, Propose, Assess>;

// Parses `name(key=value, ...)`; throws Error(kParse) on anything else.
ApiCall parse_function_call(std::string_view source);

// Canonical form used for repeat detection: function name plus the keyword
// object serialized with sorted keys.
std::string canonical_call(const ApiCall& call);

struct FencedBlock {
  std::string label;  // lowercased, trimmed
  std::string body;
  std::size_t begin = 0;  // offset of the opening fence
};

std::vector<FencedBlock> fenced_blocks(std::string_view text);

struct ParsedTurn {
  std::string thought;  // text preceding the chosen block
  std::string action_text;
  Action action;
};

// The last block labelled "python" or "json" decides the action: python
// blocks are API calls; json blocks are proposals for the generation module
// and assessments for the evaluation module. Throws Error(kParse) when no
// usable block exists and Error(kValidation) for out-of-contract values
// (relation "associate", unknown relation, score outside 0..100).
ParsedTurn parse_turn(std::string_view text, Module expected);
Action parse_action(std::string_view text, Module expected);

Propose parse_proposal_json(const nlohmann::json& j);
Assess parse_assessment_json(const nlohmann::json& j);

nlohmann::json to_json(const Propose& p);
nlohmann::json to_json(const Assess& a);

// The JSON answer formats as they appear in prompts and hand-offs.
std::string proposal_text(const Propose& p);
std::string assessment_text(const Assess& a);

// Integral values print without a fraction ("85"), others in shortest form.
std::string format_number(double v);

}  // namespace hypoforge::agent
