#include "hypoforge/eval/metrics.hpp"

#include <algorithm>

#include "hypoforge/agent/action.hpp"
#include "hypoforge/agent/prompts.hpp"
#include "hypoforge/error.hpp"

namespace hypoforge::eval {

using nlohmann::json;

int novelty_r(const kb::KnowledgeBase& kb, const kb::TripletKey& proposal, kb::Orientation orientation) {
  return kb::contains(kb, proposal, orientation) ? 0 : 1;
}

int alignment_r(const TestCase& c, const kb::TripletKey& proposal) {
  if (proposal.subject_id != c.subject.id || proposal.object_id != c.object.id) {
    throw Error(ErrorCode::kContract, "proposal (" + proposal.subject_id + ", " + proposal.object_id +
                                          ") does not match case " + c.id);
  }
  return c.truth_relations.contains(proposal.relation) ? 1 : 0;
}

namespace {

std::optional<double> score_value(const json& v) {
  double x = 0;
  if (v.is_number()) {
    x = v.get<double>();
  } else if (v.is_string()) {
    auto s = v.get<std::string>();
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    try {
      std::size_t used = 0;
      x = std::stod(s, &used);
      if (used != s.size()) return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  } else {
    return std::nullopt;
  }
  if (!(x >= 0 && x <= 100)) return std::nullopt;
  return x;
}

std::optional<std::pair<double, double>> scores_of(const json& j) {
  if (!j.is_object() || !j.contains("Novelty Score") || !j.contains("Alignment Score")) {
    return std::nullopt;
  }
  auto n = score_value(j["Novelty Score"]);
  auto a = score_value(j["Alignment Score"]);
  if (!n || !a) return std::nullopt;
  return std::pair(*n, *a);
}

}  // namespace

std::optional<std::pair<double, double>> parse_judge_scores(std::string_view text) {
  const auto blocks = agent::fenced_blocks(text);
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    if (!it->label.empty() && it->label != "json") continue;
    return scores_of(json::parse(it->body, nullptr, false));
  }
  const auto open = text.find('{');
  const auto close = text.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    return std::nullopt;
  }
  return scores_of(json::parse(text.substr(open, close - open + 1), nullptr, false));
}

std::vector<kb::Pmid> select_related_past(const query::KnowledgeStore& store, const TestCase& c,
                                          const std::string& description, std::size_t limit) {
  std::vector<query::RankedHit> hits;
  for (auto p : c.related_past_pmids) {
    if (!store.kb().find_article(p)) continue;
    hits.push_back({static_cast<query::DocId>(kb::to_int(p)), store.article_index().score(description,
                                                                  static_cast<query::DocId>(kb::to_int(p)))});
  }
  query::sort_ranked(hits);
  std::vector<kb::Pmid> out;
  for (std::size_t i = 0; i < hits.size() && i < limit; ++i) {
    out.push_back(kb::Pmid{static_cast<std::int64_t>(hits[i].id)});
  }
  return out;
}

std::string literature_block(const std::vector<const kb::Article*>& articles) {
  if (articles.empty()) return "None";
  std::string out;
  for (const auto* a : articles) {
    if (!out.empty()) out += "\n\n";
    out += "PMID " + std::to_string(kb::to_int(a->pmid)) + "\nTitle: " + a->title +
           "\nAbstract: " + a->abstract_text;
  }
  return out;
}

JudgeScores judge_descriptions(const agent::ChatBackend& backend, const TestCase& c,
                               const std::string& description, const query::KnowledgeStore& store,
                               const std::map<kb::Pmid, kb::Article>& truth_articles,
                               const JudgeOptions& options) {
  std::vector<const kb::Article*> related;
  for (auto p : select_related_past(store, c, description, options.related_limit)) {
    related.push_back(store.kb().find_article(p));
  }
  std::vector<const kb::Article*> truth;
  for (auto p : c.truth_pmids) {
    auto it = truth_articles.find(p);
    if (it != truth_articles.end()) truth.push_back(&it->second);
  }
  const auto name = [](const kb::Entity& e) { return e.name.empty() ? e.id : e.name; };
  const agent::PromptParams params{
      {"entity1_name", name(c.subject)},
      {"entity2_name", name(c.object)},
      {"proposed_hypothesis_description", description},
      {"related_past_literature", literature_block(related)},
      {"ground_truth_literature", literature_block(truth)},
  };

  agent::ChatRequest req;
  req.temperature = options.temperature;
  req.context = {agent::Module::kJudge, std::nullopt, 1};
  req.messages.push_back({"user", agent::render_prompt(agent::TemplateId::kJudge, params)});

  JudgeScores out;
  for (int attempt = 1; attempt <= 2; ++attempt) {
    out.attempts = attempt;
    const auto reply = agent::complete_with_retry(backend, req, options.retry);
    if (auto scores = parse_judge_scores(reply)) {
      out.novelty_d = scores->first;
      out.alignment_d = scores->second;
      return out;
    }
    req.messages.push_back({"assistant", reply});
    req.messages.push_back({"user", agent::render_prompt(agent::TemplateId::kJudgeRetry, {})});
    req.context.inner = attempt + 1;
  }
  return out;
}

}  // namespace hypoforge::eval
