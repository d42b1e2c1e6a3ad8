#include "hypoforge/eval/report.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "hypoforge/error.hpp"

namespace hypoforge::eval {

using nlohmann::json;

ProposalRow proposal_row(const TestCase& c, const agent::EpisodeResult& r) {
  ProposalRow row;
  row.case_id = c.id;
  row.subject_id = c.subject.id;
  row.object_id = c.object.id;
  row.ok = r.ok && r.final_proposal.has_value();
  row.error = r.error;
  if (row.ok) row.proposal = r.final_proposal;
  if (r.terminated_by) row.terminated_by = std::string(agent::to_string(*r.terminated_by));
  row.outer_iterations = r.outer_iterations_used;
  for (int n : r.generation_inner) row.generation_steps += n;
  for (int n : r.evaluation_inner) row.evaluation_steps += n;
  for (const auto& call : r.api_calls) ++row.api_calls[call.function];
  return row;
}

json to_json(const ProposalRow& row) {
  json j{{"case_id", row.case_id},
         {"subject_id", row.subject_id},
         {"object_id", row.object_id},
         {"ok", row.ok},
         {"terminated_by", row.terminated_by.empty() ? json(nullptr) : json(row.terminated_by)},
         {"outer_iterations", row.outer_iterations},
         {"generation_steps", row.generation_steps},
         {"evaluation_steps", row.evaluation_steps},
         {"api_calls", row.api_calls}};
  if (row.proposal) {
    j["relation"] = kb::to_string(row.proposal->relation);
    j["description"] = row.proposal->description;
  } else {
    j["relation"] = nullptr;
    j["description"] = nullptr;
  }
  if (!row.error.empty()) j["error"] = row.error;
  return j;
}

ProposalRow proposal_row_from_json(const json& j) {
  ProposalRow row;
  try {
    row.case_id = j.at("case_id").get<std::string>();
    row.subject_id = j.at("subject_id").get<std::string>();
    row.object_id = j.at("object_id").get<std::string>();
    row.ok = j.at("ok").get<bool>();
    if (j.contains("error")) row.error = j["error"].get<std::string>();
    if (j.contains("terminated_by") && !j["terminated_by"].is_null()) {
      row.terminated_by = j["terminated_by"].get<std::string>();
    }
    row.outer_iterations = j.value("outer_iterations", 0);
    row.generation_steps = j.value("generation_steps", 0);
    row.evaluation_steps = j.value("evaluation_steps", 0);
    if (j.contains("api_calls")) row.api_calls = j["api_calls"].get<std::map<std::string, std::size_t>>();
    if (row.ok) {
      const auto rel = kb::parse_relation(j.at("relation").get<std::string>());
      if (!rel) throw Error(ErrorCode::kParse, "unknown relation in proposal row " + row.case_id);
      row.proposal = agent::Propose{*rel, j.at("description").get<std::string>()};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed proposal row: ") + e.what());
  }
  return row;
}

std::vector<ProposalRow> load_proposals(std::istream& in) {
  std::vector<ProposalRow> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error(ErrorCode::kParse, "proposals line " + std::to_string(lineno) + " is not JSON");
    }
    out.push_back(proposal_row_from_json(j));
  }
  return out;
}

std::vector<ProposalRow> load_proposals_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open proposals " + path.string());
  return load_proposals(in);
}

json to_json(const CaseRow& row) {
  json j = to_json(row.run);
  if (row.run.proposal) {
    j["novelty_r"] = row.novelty_r;
    j["alignment_r"] = row.alignment_r;
  }
  if (row.judged) {
    j["novelty_d"] = row.judge.novelty_d ? json(*row.judge.novelty_d) : json(nullptr);
    j["alignment_d"] = row.judge.alignment_d ? json(*row.judge.alignment_d) : json(nullptr);
    j["judge_attempts"] = row.judge.attempts;
    j["judge_missing"] = row.judge.missing();
  }
  return j;
}

std::optional<Stat> describe(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  Stat s;
  s.n = values.size();
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double sq = 0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(s.n));
  return s;
}

MetricReport aggregate(const std::vector<CaseRow>& rows) {
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, "no rows to aggregate");
  MetricReport r;
  r.cases = rows.size();
  std::vector<double> nov_r, ali_r, nov_d, ali_d, outer, gen, eval, calls;
  for (const auto& row : rows) {
    if (!row.run.proposal) {
      ++r.failed;
      continue;
    }
    ++r.evaluated;
    nov_r.push_back(row.novelty_r);
    ali_r.push_back(row.alignment_r);
    if (row.judged) {
      if (row.judge.missing()) {
        ++r.judge_missing;
      } else {
        nov_d.push_back(*row.judge.novelty_d);
        ali_d.push_back(*row.judge.alignment_d);
      }
    }
    ++r.relation_histogram[std::string(kb::to_string(row.run.proposal->relation))];
    if (!row.run.terminated_by.empty()) ++r.terminated_by[row.run.terminated_by];
    outer.push_back(row.run.outer_iterations);
    gen.push_back(row.run.generation_steps);
    eval.push_back(row.run.evaluation_steps);
    std::size_t total = 0;
    for (const auto& [fn, n] : row.run.api_calls) {
      r.api_calls_by_function[fn] += n;
      total += n;
    }
    calls.push_back(static_cast<double>(total));
  }
  if (auto s = describe(nov_r)) r.novelty_r = 100.0 * s->mean;
  if (auto s = describe(ali_r)) r.alignment_r = 100.0 * s->mean;
  r.novelty_d = describe(nov_d);
  r.alignment_d = describe(ali_d);
  r.outer_iterations = describe(outer);
  r.generation_steps = describe(gen);
  r.evaluation_steps = describe(eval);
  r.api_calls = describe(calls);
  return r;
}

namespace {

json stat_json(const std::optional<Stat>& s) {
  if (!s) return nullptr;
  return json{{"mean", s->mean}, {"std", s->stddev}, {"n", s->n}};
}

std::string fixed2(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *v);
  return buf;
}

}  // namespace

json to_json(const MetricReport& r) {
  return json{{"cases", r.cases},
              {"evaluated", r.evaluated},
              {"failed", r.failed},
              {"novelty_r", r.novelty_r ? json(*r.novelty_r) : json(nullptr)},
              {"alignment_r", r.alignment_r ? json(*r.alignment_r) : json(nullptr)},
              {"novelty_d", stat_json(r.novelty_d)},
              {"alignment_d", stat_json(r.alignment_d)},
              {"judge_missing", r.judge_missing},
              {"relation_histogram", r.relation_histogram},
              {"terminated_by", r.terminated_by},
              {"outer_iterations", stat_json(r.outer_iterations)},
              {"generation_steps", stat_json(r.generation_steps)},
              {"evaluation_steps", stat_json(r.evaluation_steps)},
              {"api_calls", stat_json(r.api_calls)},
              {"api_calls_by_function", r.api_calls_by_function}};
}

std::vector<CaseRow> evaluate(const std::vector<TestCase>& cases, const std::vector<ProposalRow>& proposals,
                              const query::KnowledgeStore& store,
                              const std::map<kb::Pmid, kb::Article>& truth_articles,
                              const agent::ChatBackend* judge, const JudgeOptions& options,
                              kb::Orientation orientation, std::size_t parallelism) {
  std::map<std::string, const ProposalRow*> by_case;
  for (const auto& p : proposals) {
    if (!by_case.emplace(p.case_id, &p).second) {
      throw Error(ErrorCode::kValidation, "duplicate proposal row for case '" + p.case_id + "'");
    }
  }
  std::vector<CaseRow> rows(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    auto& row = rows[i];
    auto it = by_case.find(c.id);
    if (it == by_case.end()) {
      row.run.case_id = c.id;
      row.run.subject_id = c.subject.id;
      row.run.object_id = c.object.id;
      row.run.error = "no proposal for this case";
      continue;
    }
    row.run = *it->second;
    if (row.run.subject_id != c.subject.id || row.run.object_id != c.object.id) {
      throw Error(ErrorCode::kContract, "proposal row for case '" + c.id + "' names other entities");
    }
    if (!row.run.proposal) continue;
    const kb::TripletKey key{c.subject.id, row.run.proposal->relation, c.object.id};
    row.novelty_r = novelty_r(store.kb(), key, orientation);
    row.alignment_r = alignment_r(c, key);
  }
  if (!judge) return rows;

  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(cases.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      auto& row = rows[i];
      if (!row.run.proposal) continue;
      try {
        row.judge = judge_descriptions(*judge, cases[i], row.run.proposal->description, store,
                                       truth_articles, options);
        row.judged = true;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const auto n = std::max<std::size_t>(1, std::min(parallelism, cases.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) {
      throw Error(ErrorCode::kBackend, "judge failed for case '" + cases[i].id + "': " + errors[i]);
    }
  }
  return rows;
}

std::string render_table(const MetricReport& r, const std::string& setting, const std::string& threshold) {
  const std::vector<std::string> head{"Setting", "ET", "novelty_r", "alignment_r", "novelty_d",
                                      "novelty_d(sd)", "alignment_d", "alignment_d(sd)"};
  const auto mean = [](const std::optional<Stat>& s) {
    return s ? std::optional<double>(s->mean) : std::nullopt;
  };
  const auto sd = [](const std::optional<Stat>& s) {
    return s ? std::optional<double>(s->stddev) : std::nullopt;
  };
  const std::vector<std::string> cells{setting,
                                       threshold,
                                       fixed2(r.novelty_r),
                                       fixed2(r.alignment_r),
                                       fixed2(mean(r.novelty_d)),
                                       fixed2(sd(r.novelty_d)),
                                       fixed2(mean(r.alignment_d)),
                                       fixed2(sd(r.alignment_d))};
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto w = std::max(head[i].size(), cells[i].size());
      out << (i ? " | " : "") << v[i] << std::string(w - v[i].size(), ' ');
    }
    out << '\n';
  };
  line(head);
  std::vector<std::string> rule;
  for (std::size_t i = 0; i < head.size(); ++i) {
    rule.push_back(std::string(std::max(head[i].size(), cells[i].size()), '-'));
  }
  line(rule);
  line(cells);
  out << "cases=" << r.cases << " evaluated=" << r.evaluated << " failed=" << r.failed
      << " judge_missing=" << r.judge_missing << '\n';
  return out.str();
}

}  // namespace hypoforge::eval
