#include "hypoforge/agent/memory.hpp"

#include "hypoforge/error.hpp"

namespace hypoforge::agent {

std::string_view to_string(StepKind k) {
  switch (k) {
    case StepKind::kThought: return "thought";
    case StepKind::kAction: return "action";
    case StepKind::kObservation: return "observation";
  }
  return "";
}

std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::kNone: return "none";
    case ActionKind::kApiCall: return "api_call";
    case ActionKind::kPropose: return "propose";
    case ActionKind::kAssess: return "assess";
  }
  return "";
}

const MemoryEntry& MemoryLog::append(StepKind kind, Module module, int outer, int inner,
                                     std::string text, ActionKind action, std::string call_key) {
  if (!entries_.empty() && outer < entries_.back().outer) {
    throw Error(ErrorCode::kContract, "memory entries must not go back to an earlier outer iteration");
  }
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->module != module) continue;
    if (std::pair(outer, inner) < std::pair(it->outer, it->inner)) {
      throw Error(ErrorCode::kContract, "memory entries must be appended in iteration order");
    }
    break;
  }
  MemoryEntry e;
  e.index = entries_.size();
  e.kind = kind;
  e.module = module;
  e.outer = outer;
  e.inner = inner;
  e.text = std::move(text);
  e.action = action;
  e.call_key = std::move(call_key);
  entries_.push_back(std::move(e));
  return entries_.back();
}

std::vector<std::size_t> visible_entries(const MemoryLog& log, Module reader,
                                         const AgentConfig& config) {
  std::vector<std::size_t> out;
  const bool shared = config.architecture == Architecture::kSingle;
  for (const auto& e : log.entries()) {
    bool keep = false;
    if (shared) {
      keep = true;
    } else if (reader == Module::kExtractor) {
      keep = config.extractor_context == ExtractorContext::kBothLogs ||
             e.module == Module::kGeneration || e.action == ActionKind::kAssess;
    } else {
      keep = e.module == reader;
    }
    if (keep) out.push_back(e.index);
  }
  return out;
}

std::string render_scratchpad(const MemoryLog& log, const std::vector<std::size_t>& indices) {
  std::string out;
  for (auto i : indices) {
    const auto& e = log.entries().at(i);
    std::string label(to_string(e.kind));
    label[0] = static_cast<char>(label[0] - 'a' + 'A');
    if (!out.empty()) out += '\n';
    out += label + " (" + (e.module == Module::kGeneration ? "Generator" : "Evaluator") +
           ", outer " + std::to_string(e.outer) + ", inner " + std::to_string(e.inner) +
           "): " + e.text;
  }
  return out;
}

std::size_t detect_repeat(const MemoryLog& log, Module module, const AgentConfig& config,
                          const ApiCall& call) {
  const auto key = canonical_call(call);
  std::size_t count = 0;
  for (auto i : visible_entries(log, module, config)) {
    const auto& e = log.entries()[i];
    if (e.module == module && e.action == ActionKind::kApiCall && e.call_key == key) ++count;
  }
  return count;
}

nlohmann::json to_json(const MemoryEntry& e) {
  nlohmann::json j{{"index", e.index},
                   {"kind", to_string(e.kind)},
                   {"module", to_string(e.module)},
                   {"outer", e.outer},
                   {"inner", e.inner},
                   {"text", e.text}};
  if (e.action != ActionKind::kNone) j["action"] = to_string(e.action);
  if (!e.call_key.empty()) j["call_key"] = e.call_key;
  return j;
}

}  // namespace hypoforge::agent
