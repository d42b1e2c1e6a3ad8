#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypoforge/agent/runtime.hpp"
#include "hypoforge/eval/metrics.hpp"
#include "hypoforge/eval/test_set.hpp"

namespace hypoforge::eval {

// One line of proposals.jsonl, the hand-off between `run` and `eval`.
struct ProposalRow {
  std::string case_id;
  std::string subject_id;
  std::string object_id;
  bool ok = false;
  std::string error;
  std::optional<agent::Propose> proposal;
  std::string terminated_by;
  int outer_iterations = 0;
  int generation_steps = 0;
  int evaluation_steps = 0;
  std::map<std::string, std::size_t> api_calls;  // by function
};

ProposalRow proposal_row(const TestCase& c, const agent::EpisodeResult& r);
nlohmann::json to_json(const ProposalRow& row);
ProposalRow proposal_row_from_json(const nlohmann::json& j);
// Throws Error(kParse) on malformed lines.
std::vector<ProposalRow> load_proposals(std::istream& in);
std::vector<ProposalRow> load_proposals_file(const std::filesystem::path& path);

struct CaseRow {
  ProposalRow run;
  int novelty_r = 0;
  int alignment_r = 0;
  JudgeScores judge;
  bool judged = false;
};

nlohmann::json to_json(const CaseRow& row);

struct Stat {
  double mean = 0;
  double stddev = 0;  // population
  std::size_t n = 0;
};

// Population mean and standard deviation; nullopt for no values.
std::optional<Stat> describe(const std::vector<double>& values);

struct MetricReport {
  std::size_t cases = 0;
  std::size_t evaluated = 0;  // rows with a proposal
  std::size_t failed = 0;
  std::optional<double> novelty_r;    // percent
  std::optional<double> alignment_r;  // percent
  std::optional<Stat> novelty_d;
  std::optional<Stat> alignment_d;
  std::size_t judge_missing = 0;
  std::map<std::string, std::size_t> relation_histogram;
  std::map<std::string, std::size_t> terminated_by;
  std::optional<Stat> outer_iterations;
  std::optional<Stat> generation_steps;
  std::optional<Stat> evaluation_steps;
  std::optional<Stat> api_calls;
  std::map<std::string, std::size_t> api_calls_by_function;
};

// Rows without a proposal count as failed and are left out of every metric.
// Judge columns average the judged rows with both scores present; a column
// with no such row is absent. Throws Error(kInvalidArgument) for no rows.
MetricReport aggregate(const std::vector<CaseRow>& rows);

nlohmann::json to_json(const MetricReport& r);

// Scores every test case against its proposal row (matched by case id).
// `judge` may be null to skip the description metrics.
std::vector<CaseRow> evaluate(const std::vector<TestCase>& cases,
                              const std::vector<ProposalRow>& proposals,
                              const query::KnowledgeStore& store,
                              const std::map<kb::Pmid, kb::Article>& truth_articles,
                              const agent::ChatBackend* judge, const JudgeOptions& options,
                              kb::Orientation orientation = kb::Orientation::kDirected,
                              std::size_t parallelism = 1);

// Fixed two-decimal table: setting, ET, the four metrics and both sigmas.
std::string render_table(const MetricReport& r, const std::string& setting,
                         const std::string& threshold);

}  // namespace hypoforge::eval
