#include "hypoforge/cli/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "hypoforge/agent/backend.hpp"
#include "hypoforge/agent/runtime.hpp"
#include "hypoforge/agent/tools.hpp"
#include "hypoforge/error.hpp"
#include "hypoforge/eval/report.hpp"
#include "hypoforge/eval/test_set.hpp"
#include "hypoforge/kb/ingest.hpp"
#include "hypoforge/kb/snapshot.hpp"
#include "hypoforge/query/access.hpp"
#include "hypoforge/query/store.hpp"
#include "hypoforge/service/remote.hpp"
#include "hypoforge/service/service.hpp"

namespace hypoforge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
  if (replay.has_value() == endpoint.has_value()) {
    throw Error(ErrorCode::kConfig, "exactly one of a replay script or a live endpoint must be set");
  }
  if (parallelism < 1) throw Error(ErrorCode::kConfig, "parallelism must be at least 1");
  if (max_hops < 1) throw Error(ErrorCode::kConfig, "max_hops must be at least 1");
  agent.validate();
}

RunConfig run_config_from_json(const json& j, RunConfig c) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "run config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "agent") c.agent = agent::config_from_json(value, c.agent);
      else if (key == "parallelism") c.parallelism = value.get<std::size_t>();
      else if (key == "replay") c.replay = value.get<std::string>();
      else if (key == "endpoint") c.endpoint = value.get<std::string>();
      else if (key == "model") c.model = value.get<std::string>();
      else if (key == "api_key_env") c.api_key_env = value.get<std::string>();
      else if (key == "service") c.service = value.get<std::string>();
      else if (key == "max_hops") c.max_hops = value.get<std::size_t>();
      else throw Error(ErrorCode::kConfig, "unknown run config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("run config: ") + e.what());
  }
  return c;
}

namespace {

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  auto j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kParse, path.string() + " is not valid JSON");
  return j;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
}

std::string api_key(const std::string& env) {
  const char* v = std::getenv(env.c_str());
  return v ? v : "";
}

std::unique_ptr<agent::ChatBackend> make_backend(const std::optional<fs::path>& replay,
                                                 const std::optional<std::string>& endpoint,
                                                 const std::string& model, const std::string& key_env) {
  if (replay) return std::make_unique<agent::ScriptedBackend>(agent::ScriptedBackend::load_file(*replay));
  if (endpoint) return std::make_unique<agent::HttpChatBackend>(*endpoint, model, api_key(key_env));
  return nullptr;
}

// ---- ingest ----

struct IngestArgs {
  std::string triplets, articles, mesh, cutoff, out;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
  const auto cutoff = kb::Date::parse(a.cutoff);
  if (!cutoff) throw Error(ErrorCode::kConfig, "invalid --cutoff '" + a.cutoff + "'");
  if (!a.mesh.empty() && !fs::exists(a.mesh)) throw Error(ErrorCode::kIo, "cannot open " + a.mesh);
  auto result = kb::ingest_files(a.triplets, a.articles, *cutoff);
  kb::write_snapshot(result.kb, a.out, a.mesh);
  auto report = kb::report_json(result.report);
  write_file(fs::path(a.out) / "ingest_report.json", report.dump(2) + "\n");
  report["rejections"] = report["rejections"].size();
  report["entities"] = result.kb.entities().size();
  report["articles"] = result.kb.articles().size();
  out << report.dump(2) << '\n';
  return 0;
}

// ---- testset ----

struct TestsetArgs {
  std::string kb, candidates, candidate_articles, impact, target, window_end, related = "either", out;
  std::size_t top_journals = 50;
};

int cmd_testset(const TestsetArgs& a, std::ostream& out) {
  const auto store = query::KnowledgeStore::open(a.kb);
  eval::TestSetOptions opt;
  opt.target_entity = a.target;
  opt.top_journals = a.top_journals;
  if (!a.window_end.empty()) {
    opt.window_end = kb::Date::parse(a.window_end);
    if (!opt.window_end) throw Error(ErrorCode::kConfig, "invalid --window-end '" + a.window_end + "'");
  }
  if (a.related == "both") opt.related = eval::RelatedMode::kBoth;
  else if (a.related != "either") throw Error(ErrorCode::kConfig, "--related must be 'either' or 'both'");
  std::ifstream triplets(a.candidates);
  if (!triplets) throw Error(ErrorCode::kIo, "cannot open " + a.candidates);
  std::ifstream articles(a.candidate_articles);
  if (!articles) throw Error(ErrorCode::kIo, "cannot open " + a.candidate_articles);
  const auto impact = eval::ImpactTable::load_file(a.impact);
  auto result = eval::build_test_set(triplets, articles, *store, impact, opt);

  fs::create_directories(a.out);
  std::ostringstream tests;
  eval::write_test_set(tests, result.cases);
  write_file(fs::path(a.out) / "tests.jsonl", tests.str());
  std::string truth;
  for (const auto& [pmid, article] : result.truth_articles) truth += kb::article_json(article).dump() + "\n";
  write_file(fs::path(a.out) / "truth_articles.jsonl", truth);
  auto report = eval::to_json(result.report);
  write_file(fs::path(a.out) / "testset_report.json", report.dump(2) + "\n");
  report["cleaning"].erase("rejections");
  out << report.dump(2) << '\n';
  return 0;
}

// ---- run ----

struct RunArgs {
  std::string kb, tests, config, out;
  std::optional<std::string> replay, endpoint, model, api_key_env, service, architecture;
  std::optional<double> threshold, temperature_react, temperature_extract;
  std::optional<int> max_outer, max_inner, max_retries;
  std::optional<std::size_t> parallelism, max_hops;
};

RunConfig resolve_run_config(const RunArgs& a) {
  RunConfig c;
  if (!a.config.empty()) c = run_config_from_json(read_json_file(a.config));
  c.kb = a.kb;
  c.tests = a.tests;
  c.out = a.out;
  if (a.replay) {
    c.replay = *a.replay;
    c.endpoint.reset();
  }
  if (a.endpoint) {
    c.endpoint = *a.endpoint;
    if (!a.replay) c.replay.reset();
  }
  if (a.model) c.model = *a.model;
  if (a.api_key_env) c.api_key_env = *a.api_key_env;
  if (a.service) c.service = *a.service;
  if (a.parallelism) c.parallelism = *a.parallelism;
  if (a.max_hops) c.max_hops = *a.max_hops;
  json overrides = json::object();
  if (a.threshold) overrides["evaluation_threshold"] = *a.threshold;
  if (a.temperature_react) overrides["temperature_react"] = *a.temperature_react;
  if (a.temperature_extract) overrides["temperature_extract"] = *a.temperature_extract;
  if (a.max_outer) overrides["max_outer_iterations"] = *a.max_outer;
  if (a.max_inner) overrides["max_inner_iterations"] = *a.max_inner;
  if (a.max_retries) overrides["max_retries"] = *a.max_retries;
  if (a.architecture) overrides["architecture"] = *a.architecture;
  c.agent = agent::config_from_json(overrides, c.agent);
  c.validate();
  return c;
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  const auto cfg = resolve_run_config(args);
  const auto store = query::KnowledgeStore::open(cfg.kb);
  const auto cases = eval::load_test_set_file(cfg.tests, store->kb());

  std::shared_ptr<const query::KnowledgeAccess> access;
  if (cfg.service) {
    auto remote = std::make_shared<service::RemoteAccess>(*cfg.service);
    if (!remote->healthy()) throw Error(ErrorCode::kIo, "service at " + *cfg.service + " is not reachable");
    access = remote;
  } else {
    access = std::make_shared<query::LocalAccess>(store, cfg.max_hops);
  }
  const agent::ToolRegistry tools(access, cfg.agent.tools);
  const auto backend = make_backend(cfg.replay, cfg.endpoint, cfg.model, cfg.api_key_env);

  std::vector<agent::EpisodeResult> results(cases.size());
  std::vector<std::string> traces(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      const auto& c = cases[i];
      agent::Episode episode({c.id, c.subject, c.object}, cfg.agent, tools, *backend);
      results[i] = episode.run();
      std::ostringstream trace;
      agent::write_trace(trace, episode.memory(), results[i]);
      traces[i] = trace.str();
    }
  };
  const auto n = std::max<std::size_t>(1, std::min(cfg.parallelism, cases.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  fs::create_directories(cfg.out / "traces");
  std::string proposals;
  json failed = json::array();
  std::size_t ok = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    write_file(cfg.out / "traces" / (cases[i].id + ".jsonl"), traces[i]);
    const auto row = eval::proposal_row(cases[i], results[i]);
    proposals += eval::to_json(row).dump() + "\n";
    if (row.ok) {
      ++ok;
    } else {
      failed.push_back({{"case_id", cases[i].id}, {"error", results[i].error}});
      err << "episode " << cases[i].id << " failed: " << results[i].error << '\n';
    }
  }
  write_file(cfg.out / "proposals.jsonl", proposals);
  json summary{{"cases", cases.size()},
               {"succeeded", ok},
               {"failed", failed},
               {"agent", agent::to_json(cfg.agent)},
               {"backend", cfg.replay ? "replay" : "endpoint"},
               {"model", cfg.replay ? json(nullptr) : json(cfg.model)}};
  write_file(cfg.out / "run.json", summary.dump(2) + "\n");
  out << "ran " << cases.size() << " case(s): " << ok << " succeeded, " << failed.size() << " failed\n";
  return ok > 0 || cases.empty() ? 0 : 1;
}

// ---- eval ----

struct EvalArgs {
  std::string proposals, tests, kb, out, truth_articles, setting = "run", threshold = "-",
                                                          orientation = "directed";
  std::optional<std::string> judge_replay, endpoint;
  std::string model = "gpt-4o-mini", api_key_env = "OPENAI_API_KEY";
  std::size_t parallelism = 1;
  double temperature = 0.2;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  if (a.judge_replay && a.endpoint) {
    throw Error(ErrorCode::kConfig, "give at most one of --judge-replay and --endpoint");
  }
  const auto proposals = eval::load_proposals_file(a.proposals);
  const auto store = query::KnowledgeStore::open(a.kb);
  const auto cases = eval::load_test_set_file(a.tests, store->kb());
  std::map<kb::Pmid, kb::Article> truth;
  if (!a.truth_articles.empty()) truth = eval::load_articles_file(a.truth_articles);
  auto orientation = kb::Orientation::kDirected;
  if (a.orientation == "undirected") orientation = kb::Orientation::kUndirected;
  else if (a.orientation != "directed") throw Error(ErrorCode::kConfig, "unknown --orientation");

  const std::optional<fs::path> replay =
      a.judge_replay ? std::optional<fs::path>(*a.judge_replay) : std::nullopt;
  const auto judge = make_backend(replay, a.endpoint, a.model, a.api_key_env);
  eval::JudgeOptions opt;
  opt.temperature = a.temperature;
  const auto rows =
      eval::evaluate(cases, proposals, *store, truth, judge.get(), opt, orientation, a.parallelism);
  const auto report = eval::aggregate(rows);

  json rows_json = json::array();
  for (const auto& r : rows) rows_json.push_back(eval::to_json(r));
  const json doc{{"setting", a.setting},
                 {"evaluation_threshold", a.threshold},
                 {"aggregate", eval::to_json(report)},
                 {"rows", std::move(rows_json)}};
  const auto table = eval::render_table(report, a.setting, a.threshold);
  write_file(fs::path(a.out) / "report.json", doc.dump(2) + "\n");
  write_file(fs::path(a.out) / "report.txt", table);
  out << table;
  return 0;
}

// ---- serve ----

std::atomic<bool> g_stop{false};
extern "C" void on_signal(int) { g_stop = true; }

int cmd_serve(const std::string& kb, const std::string& host, int port, std::size_t max_hops,
              std::ostream& out) {
  auto store = query::KnowledgeStore::open(kb);
  auto svc = std::make_shared<service::QueryService>(store, max_hops);
  service::HttpServer server(svc);
  const int bound = server.bind(host, port);
  g_stop = false;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::thread watcher([&] {
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  });
  out << "listening on http://" << host << ":" << bound << std::endl;
  server.listen();
  g_stop = true;
  watcher.join();
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Literature-based hypothesis generation engine", "hypoforge"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  IngestArgs ing;
  auto* ingest = app.add_subcommand("ingest", "Build a knowledge base snapshot from JSONL corpora");
  ingest->add_option("--triplets", ing.triplets, "Triplet JSONL")->required();
  ingest->add_option("--articles", ing.articles, "Article JSONL")->required();
  ingest->add_option("--mesh", ing.mesh, "MeSH tree-number JSONL");
  ingest->add_option("--cutoff", ing.cutoff, "Cutoff date YYYY-MM-DD")->required();
  ingest->add_option("--out", ing.out, "Snapshot directory")->required();

  TestsetArgs ts;
  auto* testset = app.add_subcommand("testset", "Build a test set from post-cutoff candidates");
  testset->add_option("--kb", ts.kb, "Snapshot directory")->required();
  testset->add_option("--candidates", ts.candidates, "Candidate triplet JSONL")->required();
  testset->add_option("--candidate-articles", ts.candidate_articles, "Candidate article JSONL")->required();
  testset->add_option("--impact", ts.impact, "Journal impact JSONL")->required();
  testset->add_option("--target", ts.target, "Target entity id (MeSH descendants included)");
  testset->add_option("--top-journals", ts.top_journals, "Journals kept by impact")->capture_default_str();
  testset->add_option("--window-end", ts.window_end, "Exclusive end of the test window");
  testset->add_option("--related", ts.related, "Related past literature: either|both")->capture_default_str();
  testset->add_option("--out", ts.out, "Output directory")->required();

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run agent episodes over a test set");
  run->add_option("--kb", ra.kb, "Snapshot directory")->required();
  run->add_option("--tests", ra.tests, "Test set JSONL")->required();
  run->add_option("--config", ra.config, "Run config JSON");
  run->add_option("--replay", ra.replay, "Scripted backend JSONL");
  run->add_option("--endpoint", ra.endpoint, "Chat completions base URL");
  run->add_option("--model", ra.model, "Model name for --endpoint");
  run->add_option("--api-key-env", ra.api_key_env, "Environment variable holding the API key");
  run->add_option("--service", ra.service, "Query a running service, e.g. http://127.0.0.1:8080");
  run->add_option("--parallelism", ra.parallelism, "Concurrent episodes");
  run->add_option("--threshold", ra.threshold, "Evaluation threshold 0..100");
  run->add_option("--architecture", ra.architecture, "single|double");
  run->add_option("--max-outer", ra.max_outer, "Outer iteration cap");
  run->add_option("--max-inner", ra.max_inner, "Inner iteration cap");
  run->add_option("--max-retries", ra.max_retries, "Repeat limit for identical API calls");
  run->add_option("--temperature-react", ra.temperature_react, "Sampling temperature of module turns");
  run->add_option("--temperature-extract", ra.temperature_extract, "Sampling temperature of the extractor");
  run->add_option("--max-hops", ra.max_hops, "Path search depth limit");
  run->add_option("--out", ra.out, "Output directory")->required();

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "Score proposals against a test set");
  ev->add_option("--proposals", ea.proposals, "proposals.jsonl from run")->required();
  ev->add_option("--tests", ea.tests, "Test set JSONL")->required();
  ev->add_option("--kb", ea.kb, "Snapshot directory")->required();
  ev->add_option("--truth-articles", ea.truth_articles, "Ground-truth article JSONL");
  ev->add_option("--judge-replay", ea.judge_replay, "Scripted judge JSONL");
  ev->add_option("--endpoint", ea.endpoint, "Chat completions base URL for the judge");
  ev->add_option("--model", ea.model, "Judge model")->capture_default_str();
  ev->add_option("--api-key-env", ea.api_key_env, "Environment variable holding the API key")
      ->capture_default_str();
  ev->add_option("--temperature", ea.temperature, "Judge temperature")->capture_default_str();
  ev->add_option("--parallelism", ea.parallelism, "Concurrent judge calls")->capture_default_str();
  ev->add_option("--orientation", ea.orientation, "Novelty membership: directed|undirected")
      ->capture_default_str();
  ev->add_option("--setting", ea.setting, "Row label in the table")->capture_default_str();
  ev->add_option("--et", ea.threshold, "Threshold label in the table")->capture_default_str();
  ev->add_option("--out", ea.out, "Output directory")->required();

  std::string serve_kb, host = "127.0.0.1";
  int port = 8080;
  std::size_t serve_hops = 4;
  auto* serve = app.add_subcommand("serve", "Serve the query API over HTTP");
  serve->add_option("--kb", serve_kb, "Snapshot directory")->required();
  serve->add_option("--port", port, "Port (0 picks a free one)")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--max-hops", serve_hops, "Path search depth limit")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*ingest) return cmd_ingest(ing, out);
    if (*testset) return cmd_testset(ts, out);
    if (*run) return cmd_run(ra, out, err);
    if (*ev) return cmd_eval(ea, out);
    if (*serve) return cmd_serve(serve_kb, host, port, serve_hops, out);
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace hypoforge::cli
