#include <fstream>

#include "desk_pipeline.hpp"
#include "doctest.h"
#include "hypoforge/error.hpp"

using namespace hypoforge;
using nlohmann::json;

namespace {

std::vector<std::string> lines_of(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("desk pipeline through the command line") {
  fixtures::TempDir tmp("cli");
  REQUIRE(fixtures::desk_ingest(tmp.path()).empty());
  const auto ingest = json::parse(fixtures::slurp(tmp / "kb" / "ingest_report.json"));
  CHECK(ingest.dump().find("\"records_kept\":16") != std::string::npos);

  const auto ts = fixtures::cli({"testset", "--kb", (tmp / "kb").string(), "--candidates", fixtures::desk("candidates.jsonl"),
                                 "--candidate-articles", fixtures::desk("candidate_articles.jsonl"), "--impact",
                                 fixtures::desk("impact.jsonl"), "--target", "MESH:D003920", "--top-journals", "4",
                                 "--out", (tmp / "ts").string()});
  REQUIRE(ts.code == 0);
  const auto built = lines_of(tmp / "ts" / "tests.jsonl");
  const auto fixture = lines_of(fixtures::data("desk/tests.jsonl"));
  REQUIRE(built.size() == 4);
  for (std::size_t i = 0; i < built.size(); ++i) CHECK(json::parse(built[i]) == json::parse(fixture[i]));

  const auto outcome = fixtures::desk_run_eval(tmp.path());
  REQUIRE_MESSAGE(outcome.aggregate, outcome.failure);
  CHECK(fixtures::compare_desk(*outcome.aggregate) == "");
  CHECK(lines_of(tmp / "run" / "proposals.jsonl").size() == 5);
  CHECK(std::filesystem::exists(tmp / "run" / "traces" / "case_0003.jsonl"));
  const auto run = json::parse(fixtures::slurp(tmp / "run" / "run.json"));
  CHECK(run["succeeded"] == 5);
  CHECK(run["agent"]["max_inner_iterations"] == 4);
  const auto table = fixtures::slurp(tmp / "eval" / "report.txt");
  CHECK(table.find("80.00") != std::string::npos);

  // Runs are reproducible byte for byte, whatever the parallelism.
  const auto first = fixtures::slurp(tmp / "run" / "proposals.jsonl");
  const auto again = fixtures::cli({"run", "--kb", (tmp / "kb").string(), "--tests", fixtures::desk("tests.jsonl"),
                                    "--config", fixtures::desk("run_config.json"), "--replay",
                                    fixtures::desk("replay.jsonl"), "--parallelism", "4", "--out",
                                    (tmp / "run4").string()});
  REQUIRE(again.code == 0);
  CHECK(fixtures::slurp(tmp / "run4" / "proposals.jsonl") == first);
  CHECK(fixtures::slurp(tmp / "run4" / "traces" / "case_0003.jsonl") ==
        fixtures::slurp(tmp / "run" / "traces" / "case_0003.jsonl"));
}

TEST_CASE("command line errors use distinct exit codes") {
  fixtures::TempDir tmp("cli");
  CHECK(fixtures::cli({}).code == 2);
  CHECK(fixtures::cli({"frobnicate"}).code == 2);
  CHECK(fixtures::cli({"ingest", "--triplets", "x"}).code == 2);

  const auto missing = fixtures::cli({"ingest", "--triplets", (tmp / "none.jsonl").string(), "--articles",
                                      (tmp / "none.jsonl").string(), "--cutoff", "2024-01-01", "--out",
                                      (tmp / "kb").string()});
  CHECK(missing.code == 1);
  CHECK(missing.err.rfind("error: ", 0) == 0);

  const auto bad_date = fixtures::cli({"ingest", "--triplets", fixtures::desk("triplets.jsonl"), "--articles",
                                       fixtures::desk("articles.jsonl"), "--cutoff", "2024-13-01", "--out",
                                       (tmp / "kb").string()});
  CHECK(bad_date.code == 1);

  REQUIRE(fixtures::desk_ingest(tmp.path()).empty());
  const auto no_backend = fixtures::cli({"run", "--kb", (tmp / "kb").string(), "--tests", fixtures::desk("tests.jsonl"),
                                         "--out", (tmp / "run").string()});
  CHECK(no_backend.code == 1);
  CHECK(no_backend.err.find("config") != std::string::npos);

  const auto bad_threshold = fixtures::cli({"run", "--kb", (tmp / "kb").string(), "--tests",
                                            fixtures::desk("tests.jsonl"), "--replay", fixtures::desk("replay.jsonl"),
                                            "--threshold", "120", "--out", (tmp / "run").string()});
  CHECK(bad_threshold.code == 1);

  fixtures::spit(tmp / "cfg.json", R"({"agent": {"max_outer": 2}})");
  CHECK(fixtures::cli({"run", "--kb", (tmp / "kb").string(), "--tests", fixtures::desk("tests.jsonl"), "--config",
                       (tmp / "cfg.json").string(), "--replay", fixtures::desk("replay.jsonl"), "--out",
                       (tmp / "run").string()})
            .code == 1);

  const auto unreachable = fixtures::cli({"run", "--kb", (tmp / "kb").string(), "--tests",
                                          fixtures::desk("tests.jsonl"), "--replay", fixtures::desk("replay.jsonl"),
                                          "--service", "http://127.0.0.1:1", "--out", (tmp / "run").string()});
  CHECK(unreachable.code == 1);
}

TEST_CASE("a script that never matches fails every episode") {
  fixtures::TempDir tmp("cli");
  REQUIRE(fixtures::desk_ingest(tmp.path()).empty());
  fixtures::spit(tmp / "empty.jsonl", "");
  const auto r = fixtures::cli({"run", "--kb", (tmp / "kb").string(), "--tests", fixtures::desk("tests.jsonl"),
                                "--replay", (tmp / "empty.jsonl").string(), "--out", (tmp / "run").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("contract-error") != std::string::npos);
  const auto run = json::parse(fixtures::slurp(tmp / "run" / "run.json"));
  CHECK(run["failed"].size() == 5);
}
