#include "hypoforge/agent/runtime.hpp"

#include <ostream>

#include "hypoforge/error.hpp"

namespace hypoforge::agent {

using nlohmann::json;

namespace {

std::string display_name(const kb::Entity& e) { return e.name.empty() ? e.id : e.name; }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string retry_hint(Module m) {
  return m == Module::kGeneration
             ? "Reply with one ```python``` API call or one ```json``` proposal."
             : "Reply with one ```python``` API call or one ```json``` assessment.";
}

json call_arguments(const ApiCall& c) { return json{{"args", c.positional}, {"kwargs", c.keywords}}; }

}  // namespace

std::string_view to_string(Termination t) {
  return t == Termination::kThreshold ? "threshold" : "extractor";
}

std::string entity_type_literal(kb::EntityType t) {
  std::string s(kb::to_string(t));
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return "Entity_Type." + s;
}

Episode::Episode(QueryCase query, const AgentConfig& config, const ToolRegistry& tools,
                 const ChatBackend& backend)
    : query_(std::move(query)),
      config_(config),
      tools_(tools),
      backend_(backend),
      api_description_(tools.api_description()) {
  config_.validate();
  result_.case_id = query_.id;
}

std::string Episode::complete(const ChatRequest& request) {
  ++result_.backend_calls;
  return complete_with_retry(backend_, request, config_.retry);
}

PromptParams Episode::base_params() const {
  return {
      {"entity1_name", display_name(query_.subject)},
      {"entity2_name", display_name(query_.object)},
      {"entity1_type", entity_type_literal(query_.subject.type)},
      {"entity2_type", entity_type_literal(query_.object.type)},
      {"api_description", api_description_},
      {"max_outer_iterations", std::to_string(config_.max_outer_iterations)},
      {"max_inner_iterations", std::to_string(config_.max_inner_iterations)},
      {"evaluation_threshold", format_number(config_.evaluation_threshold)},
      {"max_retries", std::to_string(config_.max_retries)},
  };
}

ChatRequest Episode::react_request(Module module, int outer, int inner, const std::string& handoff) {
  const bool gen = module == Module::kGeneration;
  auto visible = visible_entries(log_, module, config_);
  auto params = base_params();
  params["scratchpad"] = render_scratchpad(log_, visible);
  params[gen ? "latest_assessment" : "current_proposal"] = handoff;
  contexts_.push_back({module, outer, inner, std::move(visible)});

  ChatRequest req;
  req.temperature = config_.temperature_react;
  req.context = {module, outer, inner};
  req.messages.push_back(
      {"system", render_prompt(gen ? TemplateId::kGenerationSystem : TemplateId::kEvaluationSystem, params)});
  req.messages.push_back(
      {"user", render_prompt(gen ? TemplateId::kGenerationQuery : TemplateId::kEvaluationQuery, params)});
  return req;
}

std::optional<std::pair<Action, int>> Episode::react_loop(Module m, int outer,
                                                         const std::string& handoff) {
  for (int inner = 1; inner <= config_.max_inner_iterations; ++inner) {
    const auto text = complete(react_request(m, outer, inner, handoff));
    ParsedTurn turn;
    try {
      turn = parse_turn(text, m);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kParse && e.code() != ErrorCode::kValidation) throw;
      ++result_.parse_errors;
      log_.append(StepKind::kThought, m, outer, inner, trim(text));
      log_.append(StepKind::kObservation, m, outer, inner,
                  std::string("error: ") + e.what() + ". " + retry_hint(m));
      continue;
    }
    if (!trim(turn.thought).empty()) log_.append(StepKind::kThought, m, outer, inner, trim(turn.thought));
    const auto* call = std::get_if<ApiCall>(&turn.action);
    if (!call) return std::pair(std::move(turn.action), inner);

    const auto repeats = detect_repeat(log_, m, config_, *call);
    log_.append(StepKind::kAction, m, outer, inner, trim(turn.action_text), ActionKind::kApiCall,
                canonical_call(*call));
    std::string obs;
    if (repeats >= static_cast<std::size_t>(config_.max_retries)) {
      ++result_.repeats_skipped;
      obs = "error: repeat limit reached for " + call->function + "; this call has already run " +
            std::to_string(repeats) + " time(s). Try a different action.";
    } else {
      obs = tools_.execute(*call);
      result_.api_calls.push_back({m, outer, inner, call->function, call_arguments(*call), obs});
    }
    log_.append(StepKind::kObservation, m, outer, inner, obs);
  }
  return std::nullopt;
}

std::optional<Action> Episode::forced_turn(Module m, int outer, const std::string& handoff) {
  auto req = react_request(m, outer, config_.max_inner_iterations + 1, handoff);
  const auto id = m == Module::kGeneration ? TemplateId::kForcedProposal : TemplateId::kForcedAssessment;
  req.messages.push_back({"user", render_prompt(id, base_params())});
  const auto text = complete(req);
  try {
    auto action = parse_turn(text, m).action;
    if (!std::holds_alternative<ApiCall>(action)) return action;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParse && e.code() != ErrorCode::kValidation) throw;
  }
  ++result_.parse_errors;
  return std::nullopt;
}

Propose Episode::run_generation(int outer, const std::optional<Assess>& latest) {
  const auto m = Module::kGeneration;
  const auto handoff = latest ? assessment_text(*latest) : std::string("None");
  auto done = react_loop(m, outer, handoff);
  int inner = done ? done->second : config_.max_inner_iterations;
  result_.generation_inner.push_back(inner);
  bool forced = false;
  std::optional<Propose> proposal;
  if (done) {
    proposal = std::get<Propose>(done->first);
  } else {
    forced = true;
    ++inner;
    if (auto action = forced_turn(m, outer, handoff)) {
      proposal = std::get<Propose>(*action);
    } else if (!result_.proposals.empty()) {
      proposal = result_.proposals.back().proposal;
    } else {
      throw Error(ErrorCode::kParse, "generation produced no usable proposal");
    }
  }
  log_.append(StepKind::kAction, m, outer, inner, proposal_text(*proposal), ActionKind::kPropose);
  result_.proposals.push_back({outer, *proposal, forced});
  return *proposal;
}

Assess Episode::run_evaluation(int outer, const Propose& proposal) {
  const auto m = Module::kEvaluation;
  const kb::TripletKey key{query_.subject.id, proposal.relation, query_.object.id};
  AssessmentRecord rec;
  rec.outer = outer;
  rec.runtime_novel = !tools_.access().contains(key, config_.novelty_orientation);
  const auto handoff = proposal_text(proposal);
  auto done = react_loop(m, outer, handoff);
  int inner = done ? done->second : config_.max_inner_iterations;
  result_.evaluation_inner.push_back(inner);
  if (done) {
    rec.assessment = std::get<Assess>(done->first);
  } else {
    rec.forced = true;
    ++inner;
    if (auto action = forced_turn(m, outer, handoff)) {
      rec.assessment = std::get<Assess>(*action);
    } else {
      rec.fallback = true;
      rec.assessment = Assess{false, "no usable assessment", 0.0};
    }
  }
  log_.append(StepKind::kAction, m, outer, inner, assessment_text(rec.assessment), ActionKind::kAssess);
  result_.assessments.push_back(rec);
  return rec.assessment;
}

Propose Episode::extract_final() {
  if (result_.proposals.empty()) {
    throw Error(ErrorCode::kContract, "extractor needs at least one recorded proposal");
  }
  auto visible = visible_entries(log_, Module::kExtractor, config_);
  auto params = base_params();
  params["scratchpad"] = render_scratchpad(log_, visible);
  contexts_.push_back({Module::kExtractor, result_.outer_iterations_used, 0, std::move(visible)});

  ChatRequest req;
  req.temperature = config_.temperature_extract;
  req.context = {Module::kExtractor, result_.outer_iterations_used, std::nullopt};
  req.messages.push_back({"system", render_prompt(TemplateId::kExtractorSystem, params)});
  req.messages.push_back({"user", render_prompt(TemplateId::kExtractorQuery, params)});
  const auto text = complete(req);
  try {
    const auto turn = parse_turn(text, Module::kGeneration);
    if (auto* p = std::get_if<Propose>(&turn.action)) return *p;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParse && e.code() != ErrorCode::kValidation) throw;
  }
  result_.extractor_fallback = true;
  return result_.proposals.back().proposal;
}

EpisodeResult Episode::run() {
  try {
    std::optional<Assess> latest;
    for (int outer = 1; outer <= config_.max_outer_iterations; ++outer) {
      result_.outer_iterations_used = outer;
      const auto proposal = run_generation(outer, latest);
      latest = run_evaluation(outer, proposal);
      const auto& rec = result_.assessments.back();
      if (rec.assessment.score >= config_.evaluation_threshold && rec.runtime_novel) {
        result_.final_proposal = proposal;
        result_.terminated_by = Termination::kThreshold;
        return result_;
      }
    }
    result_.final_proposal = extract_final();
    result_.terminated_by = Termination::kExtractor;
  } catch (const Error& e) {
    result_.ok = false;
    result_.error = std::string(error_code_name(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    result_.ok = false;
    result_.error = e.what();
  }
  return result_;
}

EpisodeResult run_episode(const QueryCase& query, const AgentConfig& config, const ToolRegistry& tools,
                          const ChatBackend& backend) {
  return Episode(query, config, tools, backend).run();
}

json to_json(const ApiCallRecord& r) {
  return json{{"module", to_string(r.module)}, {"outer", r.outer},         {"inner", r.inner},
              {"function", r.function},        {"arguments", r.arguments}, {"observation", r.observation}};
}

json to_json(const EpisodeResult& r) {
  json j{{"case_id", r.case_id},
         {"ok", r.ok},
         {"outer_iterations_used", r.outer_iterations_used},
         {"generation_inner", r.generation_inner},
         {"evaluation_inner", r.evaluation_inner},
         {"repeats_skipped", r.repeats_skipped},
         {"parse_errors", r.parse_errors},
         {"backend_calls", r.backend_calls},
         {"extractor_fallback", r.extractor_fallback}};
  if (!r.ok) j["error"] = r.error;
  j["final_proposal"] = r.final_proposal ? to_json(*r.final_proposal) : json(nullptr);
  j["terminated_by"] = r.terminated_by ? json(to_string(*r.terminated_by)) : json(nullptr);
  json calls = json::array();
  for (const auto& c : r.api_calls) calls.push_back(to_json(c));
  j["api_calls"] = std::move(calls);
  json proposals = json::array();
  for (const auto& p : r.proposals) {
    proposals.push_back({{"outer", p.outer}, {"proposal", to_json(p.proposal)}, {"forced", p.forced}});
  }
  j["proposals"] = std::move(proposals);
  json assessments = json::array();
  for (const auto& a : r.assessments) {
    assessments.push_back({{"outer", a.outer},
                           {"assessment", to_json(a.assessment)},
                           {"runtime_novel", a.runtime_novel},
                           {"forced", a.forced},
                           {"fallback", a.fallback}});
  }
  j["assessments"] = std::move(assessments);
  return j;
}

void write_trace(std::ostream& out, const MemoryLog& log, const EpisodeResult& result) {
  for (const auto& e : log.entries()) {
    auto j = to_json(e);
    j["type"] = "entry";
    out << j.dump() << '\n';
  }
  auto j = to_json(result);
  j["type"] = "result";
  out << j.dump() << '\n';
}

}  // namespace hypoforge::agent
