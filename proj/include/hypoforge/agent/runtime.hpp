#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypoforge/agent/action.hpp"
#include "hypoforge/agent/backend.hpp"
#include "hypoforge/agent/config.hpp"
#include "hypoforge/agent/memory.hpp"
#include "hypoforge/agent/prompts.hpp"
#include "hypoforge/agent/tools.hpp"
#include "hypoforge/kb/types.hpp"

namespace hypoforge::agent {

// A query pair; the relation between them is what the agent has to propose.
struct QueryCase {
  std::string id;
  kb::Entity subject;
  kb::Entity object;
};

struct ApiCallRecord {
  Module module = Module::kGeneration;
  int outer = 0;
  int inner = 0;
  std::string function;
  nlohmann::json arguments;  // {"args": [...], "kwargs": {...}}
  std::string observation;
};

struct ProposalRecord {
  int outer = 0;
  Propose proposal;
  bool forced = false;
};

struct AssessmentRecord {
  int outer = 0;
  Assess assessment;
  bool runtime_novel = false;  // computed against the knowledge base
  bool forced = false;
  bool fallback = false;  // forced turn unparseable; score 0 recorded
};

enum class Termination { kThreshold, kExtractor };
std::string_view to_string(Termination t);

struct EpisodeResult {
  std::string case_id;
  bool ok = true;
  std::string error;
  std::optional<Propose> final_proposal;
  std::optional<Termination> terminated_by;
  bool extractor_fallback = false;  // extractor output unusable; last proposal kept
  int outer_iterations_used = 0;
  std::vector<int> generation_inner;  // inner iterations per outer iteration
  std::vector<int> evaluation_inner;
  std::vector<ApiCallRecord> api_calls;
  std::size_t repeats_skipped = 0;
  std::size_t parse_errors = 0;
  std::vector<ProposalRecord> proposals;
  std::vector<AssessmentRecord> assessments;
  std::size_t backend_calls = 0;
};

nlohmann::json to_json(const EpisodeResult& r);
nlohmann::json to_json(const ApiCallRecord& r);

// Entries a prompt was built from; kept for inspection of memory isolation.
struct PromptContext {
  Module module = Module::kGeneration;
  int outer = 0;
  int inner = 0;
  std::vector<std::size_t> entries;
};

// One episode: alternating generation and evaluation turns over a private
// memory log. Not thread-safe; run separate episodes concurrently instead.
class Episode {
 public:
  Episode(QueryCase query, const AgentConfig& config, const ToolRegistry& tools,
          const ChatBackend& backend);

  // Iterates up to max_inner_iterations turns, then one forced turn.
  // `latest` is the previous assessment handed to the generator.
  Propose run_generation(int outer, const std::optional<Assess>& latest);
  Assess run_evaluation(int outer, const Propose& proposal);
  // Never throws on unusable extractor output; requires a recorded proposal.
  Propose extract_final();

  // Whole episode. Errors are caught and reported through the result.
  EpisodeResult run();

  const MemoryLog& memory() const { return log_; }
  const EpisodeResult& result() const { return result_; }
  const std::vector<PromptContext>& contexts() const { return contexts_; }

 private:
  std::string complete(const ChatRequest& request);
  ChatRequest react_request(Module module, int outer, int inner, const std::string& handoff);
  PromptParams base_params() const;
  // Turns until the module's final action; nullopt when the inner cap is hit.
  std::optional<std::pair<Action, int>> react_loop(Module module, int outer, const std::string& handoff);
  // The extra turn after the cap; nullopt when its output is unusable.
  std::optional<Action> forced_turn(Module module, int outer, const std::string& handoff);

  QueryCase query_;
  const AgentConfig& config_;
  const ToolRegistry& tools_;
  const ChatBackend& backend_;
  std::string api_description_;
  MemoryLog log_;
  EpisodeResult result_;
  std::vector<PromptContext> contexts_;
};

EpisodeResult run_episode(const QueryCase& query, const AgentConfig& config,
                          const ToolRegistry& tools, const ChatBackend& backend);

// Trace: one line per memory entry ({"type":"entry",...}) followed by one
// {"type":"result",...} line.
void write_trace(std::ostream& out, const MemoryLog& log, const EpisodeResult& result);

// Prompt spelling of an entity type, e.g. "Entity_Type.CHEMICAL".
std::string entity_type_literal(kb::EntityType t);

}  // namespace hypoforge::agent
