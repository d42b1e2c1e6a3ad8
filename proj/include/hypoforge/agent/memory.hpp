#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypoforge/agent/action.hpp"
#include "hypoforge/agent/config.hpp"

namespace hypoforge::agent {

enum class StepKind { kThought, kAction, kObservation };
enum class ActionKind { kNone, kApiCall, kPropose, kAssess };

std::string_view to_string(StepKind k);
std::string_view to_string(ActionKind k);

struct MemoryEntry {
  std::size_t index = 0;
  StepKind kind = StepKind::kThought;
  Module module = Module::kGeneration;
  int outer = 0;
  int inner = 0;
  std::string text;
  ActionKind action = ActionKind::kNone;  // set on action entries
  std::string call_key;                   // canonical form of API call actions
};

// Append-only transcript of one episode. Both modules write to the same log;
// the architecture decides which entries each module gets to see.
class MemoryLog {
 public:
  // Throws Error(kContract) if the outer index decreases, or if (outer, inner)
  // decreases within a module.
  const MemoryEntry& append(StepKind kind, Module module, int outer, int inner, std::string text,
                            ActionKind action = ActionKind::kNone, std::string call_key = {});

  const std::vector<MemoryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<MemoryEntry> entries_;
};

// Indices of the entries a module's prompt is built from. Single: the whole
// log. Double: only the module's own entries. The extractor reads the whole
// log under single, and under double either both logs or the generation log
// plus the evaluator's assessment actions.
std::vector<std::size_t> visible_entries(const MemoryLog& log, Module reader,
                                         const AgentConfig& config);

std::string render_scratchpad(const MemoryLog& log, const std::vector<std::size_t>& indices);

// Earlier API-call actions by `module` among its visible entries with the
// same canonical form as `call`.
std::size_t detect_repeat(const MemoryLog& log, Module module, const AgentConfig& config,
                          const ApiCall& call);

nlohmann::json to_json(const MemoryEntry& e);

}  // namespace hypoforge::agent
