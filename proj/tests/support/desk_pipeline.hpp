#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "hypoforge/cli/cli.hpp"

namespace fixtures {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = hypoforge::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

inline std::string desk(const char* file) { return data(std::string("desk/") + file).string(); }

inline std::string step_failure(const char* name, const CliResult& r) {
  if (r.code == 0) return {};
  return std::string(name) + " exited " + std::to_string(r.code) + ": " + r.err;
}

// Builds the desk snapshot under work/kb; returns an error message or "".
inline std::string desk_ingest(const std::filesystem::path& work) {
  return step_failure("ingest", cli({"ingest", "--triplets", desk("triplets.jsonl"), "--articles",
                                     desk("articles.jsonl"), "--mesh", desk("mesh.jsonl"), "--cutoff",
                                     "2024-01-01", "--out", (work / "kb").string()}));
}

struct DeskOutcome {
  std::optional<nlohmann::json> aggregate;  // "aggregate" object of report.json
  std::string failure;
};

// run (replay agent) -> eval (replay judge) over work/kb. `service` routes the
// agent's retrieval through a running query service.
inline DeskOutcome desk_run_eval(const std::filesystem::path& work, const std::string& service = {}) {
  const auto kb = (work / "kb").string();
  std::vector<std::string> run = {"run", "--kb", kb, "--tests", desk("tests.jsonl"), "--config",
                                  desk("run_config.json"), "--replay", desk("replay.jsonl"), "--out",
                                  (work / "run").string()};
  if (!service.empty()) {
    run.push_back("--service");
    run.push_back(service);
  }
  if (auto f = step_failure("run", cli(run)); !f.empty()) return {std::nullopt, f};
  if (auto f = step_failure("eval", cli({"eval", "--proposals", (work / "run" / "proposals.jsonl").string(),
                                         "--tests", desk("tests.jsonl"), "--kb", kb, "--truth-articles",
                                         desk("truth_articles.jsonl"), "--judge-replay",
                                         desk("judge_replay.jsonl"), "--out", (work / "eval").string()}));
      !f.empty()) {
    return {std::nullopt, f};
  }
  const auto report = nlohmann::json::parse(slurp(work / "eval" / "report.json"));
  return {std::optional<nlohmann::json>(std::in_place, report["aggregate"]), {}};
}

inline double round2(double v) { return std::round(v * 100) / 100; }

// Compares an aggregate against desk/expected.json to two decimals; returns
// the first mismatch or "".
inline std::string compare_desk(const nlohmann::json& agg) {
  const auto want = nlohmann::json::parse(slurp(data("desk/expected.json")));
  auto num = [&](const char* name, const nlohmann::json& got) -> std::string {
    if (!got.is_number()) return std::string(name) + " missing";
    if (round2(got.get<double>()) != round2(want[name].get<double>())) {
      return std::string(name) + " = " + std::to_string(got.get<double>()) + ", want " + want[name].dump();
    }
    return {};
  };
  for (const auto& m : {num("novelty_r", agg["novelty_r"]), num("alignment_r", agg["alignment_r"]),
                        num("novelty_d", agg["novelty_d"]["mean"]), num("novelty_d_sd", agg["novelty_d"]["std"]),
                        num("alignment_d", agg["alignment_d"]["mean"]),
                        num("alignment_d_sd", agg["alignment_d"]["std"])}) {
    if (!m.empty()) return m;
  }
  if (agg["judge_missing"] != want["judge_missing"]) return "judge_missing = " + agg["judge_missing"].dump();
  if (agg["terminated_by"] != want["terminated_by"]) return "terminated_by = " + agg["terminated_by"].dump();
  if (agg["failed"] != 0) return "failed = " + agg["failed"].dump();
  return {};
}

}  // namespace fixtures
