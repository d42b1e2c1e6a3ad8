#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypoforge/agent/backend.hpp"
#include "hypoforge/eval/test_set.hpp"
#include "hypoforge/kb/knowledge_base.hpp"
#include "hypoforge/query/store.hpp"

namespace hypoforge::eval {

// 1 when the proposed triplet is absent from the knowledge base.
int novelty_r(const kb::KnowledgeBase& kb, const kb::TripletKey& proposal,
              kb::Orientation orientation = kb::Orientation::kDirected);

// 1 when the proposed relation is among the case's truth relations. Throws
// Error(kContract) when the proposal is not about the case's entity pair.
int alignment_r(const TestCase& c, const kb::TripletKey& proposal);

struct JudgeScores {
  std::optional<double> novelty_d;
  std::optional<double> alignment_d;
  int attempts = 0;

  bool missing() const { return !novelty_d || !alignment_d; }
};

// Reads {"Novelty Score", "Alignment Score"} from the last JSON block (or the
// first bare JSON object); values may be numbers or numeric strings within
// 0..100. Returns nullopt otherwise.
std::optional<std::pair<double, double>> parse_judge_scores(std::string_view text);

struct JudgeOptions {
  double temperature = 0.2;
  std::size_t related_limit = 20;
  agent::RetryPolicy retry;
};

// The related-past articles shown to the judge: the `limit` most relevant to
// the description by text score, ties by pmid.
std::vector<kb::Pmid> select_related_past(const query::KnowledgeStore& store, const TestCase& c,
                                          const std::string& description, std::size_t limit);

// One article per paragraph: "PMID <id>\nTitle: ...\nAbstract: ...".
std::string literature_block(const std::vector<const kb::Article*>& articles);

// One completion; an unparseable or out-of-range answer is re-asked once,
// after which both scores are left missing. Backend errors propagate.
JudgeScores judge_descriptions(const agent::ChatBackend& backend, const TestCase& c,
                               const std::string& description, const query::KnowledgeStore& store,
                               const std::map<kb::Pmid, kb::Article>& truth_articles,
                               const JudgeOptions& options);

}  // namespace hypoforge::eval
