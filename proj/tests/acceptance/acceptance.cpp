// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "compare.hpp"
#include "desk_pipeline.hpp"
#include "fixtures.hpp"
#include "hypoforge/agent/runtime.hpp"
#include "hypoforge/error.hpp"
#include "hypoforge/eval/report.hpp"
#include "hypoforge/graph/knowledge_graph.hpp"
#include "hypoforge/graph/mesh_tree.hpp"
#include "hypoforge/kb/ingest.hpp"
#include "hypoforge/kb/snapshot.hpp"
#include "hypoforge/kb/validity.hpp"
#include "hypoforge/service/service.hpp"
#include "oracles.hpp"
#include "random_filter.hpp"
#include "random_kb.hpp"
#include "stores.hpp"

using namespace hypoforge;
using nlohmann::json;

namespace {

// Empty on success, otherwise the first failure.
using Check = std::function<std::string()>;

struct Criterion {
  int number;
  std::string name;
  double limit_seconds;  // 0 means no time limit
  Check check;
};

std::string first_failure(std::initializer_list<std::string> results) {
  for (const auto& r : results) {
    if (!r.empty()) return r;
  }
  return {};
}

// ---- 1: validity matrix ----

std::string validity_matrix() {
  std::size_t combos = 0;
  for (auto r : kb::all_relation_types()) {
    for (auto s : kb::all_entity_types()) {
      for (auto o : kb::all_entity_types()) {
        ++combos;
        const bool want = oracle::valid_pair(std::string(kb::to_string(r)), std::string(kb::to_string(s)),
                                             std::string(kb::to_string(o)));
        if (kb::validate_pair(r, s, o) != want) {
          return "mismatch at " + std::string(kb::to_string(r)) + " " + std::string(kb::to_string(s)) + " " +
                 std::string(kb::to_string(o));
        }
      }
    }
  }
  if (combos != 972) return "enumerated " + std::to_string(combos) + " combinations";
  std::size_t pairs = 0;
  for (auto r : kb::all_relation_types()) pairs += kb::valid_pairs(r).size();
  if (pairs != 26) return std::to_string(pairs) + " ordered class pairs";
  return {};
}

// ---- 2: ingest and snapshot ----

std::string ingest_and_snapshot() {
  const auto tp = fixtures::data("synthetic/triplets.jsonl");
  const auto ap = fixtures::data("synthetic/articles.jsonl");
  const auto res = kb::ingest_files(tp, ap, fixtures::kCutoff);
  if (res.report.triplet_lines != 1000) return "corpus has " + std::to_string(res.report.triplet_lines) + " lines";
  const auto want = oracle::naive_ingest(tp.string(), ap.string(), "2024-01-01");
  const auto got = oracle::counts_of(res.report);
  if (!(got == want.counts)) return "counters " + oracle::describe(got) + " want " + oracle::describe(want.counts);
  std::map<oracle::Key, std::pair<std::set<std::int64_t>, std::string>> records;
  for (const auto& r : res.kb.records()) {
    std::set<std::int64_t> pm;
    for (auto p : r.pmids) pm.insert(kb::to_int(p));
    records[{r.triplet.subject.id, std::string(kb::to_string(r.triplet.relation)), r.triplet.object.id}] = {
        pm, r.discovery_date.to_string()};
  }
  if (records != want.records) return "record set differs from the oracle";

  fixtures::TempDir tmp("acceptance");
  kb::write_snapshot(res.kb, tmp / "a", fixtures::data("synthetic/mesh.jsonl"));
  const auto loaded = kb::load_snapshot(tmp / "a");
  kb::write_snapshot(loaded, tmp / "b", tmp / "a" / kb::kMeshFile);
  for (const char* f : {kb::kTripletsFile, kb::kArticlesFile, kb::kManifestFile, kb::kMeshFile}) {
    if (fixtures::slurp(tmp / "a" / f) != fixtures::slurp(tmp / "b" / f)) return std::string(f) + " not bit-identical";
  }
  return {};
}

// ---- 3: graph ----

std::string graph_paths() {
  std::mt19937 rng(20240103);
  for (int round = 0; round < 100; ++round) {
    const int n = std::uniform_int_distribution<int>(2, 200)(rng);
    const int m = std::uniform_int_distribution<int>(n / 2, 2 * n)(rng);
    const auto g = fixtures::random_graph(rng, n, m);
    const auto kg = graph::KnowledgeGraph::build(g.kb);
    for (int s = 0; s < n; ++s) {
      if (!kg.index_of(fixtures::gene_id(s))) continue;
      const auto dist = oracle::bfs(g.adj, s);
      for (int d = s + 1; d < n; ++d) {
        if (!kg.index_of(fixtures::gene_id(d))) continue;
        const auto paths =
            graph::shortest_entity_paths(kg, fixtures::gene_id(s), fixtures::gene_id(d), 1, graph::kUnlimitedHops);
        const int got = paths.empty() ? -1 : static_cast<int>(paths[0].size()) - 1;
        if (got != dist[d]) {
          return "graph " + std::to_string(round) + ": " + fixtures::gene_id(s) + " -> " + fixtures::gene_id(d) +
                 " length " + std::to_string(got) + ", breadth-first " + std::to_string(dist[d]);
        }
      }
    }
  }

  const auto t = graph::MeshTree::load_file(fixtures::data("mesh50/mesh.jsonl"));
  if (t.entity_count() != 50) return "tree has " + std::to_string(t.entity_count()) + " nodes";
  auto has = [](const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  for (const auto& [a, nums] : t.entries()) {
    for (const auto& c : t.children(a)) {
      if (!has(t.parents(c), a)) return a + " lists child " + c + " without the reverse";
    }
    for (const auto& p : t.parents(a)) {
      if (!has(t.children(p), a)) return a + " lists parent " + p + " without the reverse";
    }
    for (const auto& s : t.siblings(a)) {
      if (!has(t.siblings(s), a)) return a + " lists sibling " + s + " without the reverse";
    }
    if (has(t.siblings(a), a)) return a + " is its own sibling";
  }
  return {};
}

// ---- 4: retrieval ----

std::string retrieval_ops() {
  const auto store = fixtures::open_store("synthetic");
  const oracle::LinearQuery ref(store->kb());
  fixtures::FilterGenerator gen(store->kb(), 20240104);
  for (int i = 0; i < 200; ++i) {
    const auto f = gen.next();
    const auto where = [&](const char* op, const std::string& why) {
      return std::string(op) + " on filter " + std::to_string(i) + ": " + why;
    };
    if (auto e = fixtures::agree<query::ScoredEntity>([&] { return query::get_entities(*store, f); },
                                                      [&] { return ref.get_entities(f); });
        !e.empty()) {
      return where("get_entities", e);
    }
    if (auto e = fixtures::agree<query::RelationCount>([&] { return query::get_relations(*store, f); },
                                                       [&] { return ref.get_relations(f); });
        !e.empty()) {
      return where("get_relations", e);
    }
    if (auto e = fixtures::agree<query::ScoredRecord>([&] { return query::get_triplets(*store, f); },
                                                      [&] { return ref.get_triplets(f); });
        !e.empty()) {
      return where("get_triplets", e);
    }
    if (auto e = fixtures::agree<query::ScoredPmid>([&] { return query::get_articles(*store, f); },
                                                    [&] { return ref.get_articles(f); });
        !e.empty()) {
      return where("get_articles", e);
    }
    const auto want = ref.browse(f.pmids);
    std::optional<query::BrowseResult> got;
    try {
      got = query::browse_articles(*store, f.pmids);
    } catch (const Error&) {
    }
    if (want.has_value() != got.has_value()) return where("browse_articles", "acceptance differs");
    if (want) {
      std::vector<kb::Pmid> a, b;
      for (const auto& x : got->articles) a.push_back(x.pmid);
      for (const auto& x : want->articles) b.push_back(x.pmid);
      if (a != b || got->missing != want->missing) return where("browse_articles", "result differs");
    }
  }
  return {};
}

// ---- 5: agent ----

using agent::Module;
using Rule = agent::ScriptedBackend::Rule;

std::string propose(const std::string& rel) {
  return "Thought: proposing.\n```json\n" + json{{"Relation", rel}, {"Hypothesis Description", "A link."}}.dump() +
         "\n```";
}

std::string assess(int score) {
  return "Thought: assessed.\n```json\n" +
         json{{"Is New", "True"}, {"Feedback", "noted"}, {"Evaluation Score", score}}.dump() + "\n```";
}

std::string call(const std::string& code) { return "Thought: look up.\n```python\n" + code + "\n```"; }

agent::QueryCase query_case(const query::KnowledgeStore& store, const std::string& s, const std::string& o,
                            const std::string& id = "case") {
  return {id, *store.kb().find_entity(s), *store.kb().find_entity(o)};
}

std::string agent_runtime() {
  const auto store = fixtures::desk_store();
  const agent::ToolRegistry tools(std::make_shared<query::LocalAccess>(store));
  agent::AgentConfig cfg;
  cfg.retry.retries = 0;
  const auto sema = query_case(*store, "MESH:C000591245", "MESH:D003924");

  {
    const agent::ScriptedBackend b({{Module::kGeneration, {}, {}, {}, propose("treat")},
                                    {Module::kEvaluation, {}, {}, {}, assess(85)}});
    const auto r = agent::run_episode(sema, cfg, tools, b);
    if (!r.ok || r.terminated_by != agent::Termination::kThreshold || r.outer_iterations_used != 1) {
      return "(a) assess 85 did not stop by threshold after one outer iteration";
    }
  }
  {
    const agent::ScriptedBackend b({{Module::kGeneration, {}, {}, {}, propose("treat")},
                                    {Module::kEvaluation, {}, {}, {}, assess(40)},
                                    {Module::kExtractor, {}, {}, {}, propose("cause")}});
    const auto r = agent::run_episode(sema, cfg, tools, b);
    if (!r.ok || r.outer_iterations_used != 3 || r.terminated_by != agent::Termination::kExtractor ||
        !r.final_proposal || r.final_proposal->relation != kb::RelationType::kCause) {
      return "(b) assess 40 did not exhaust three outer iterations and use the extractor";
    }
  }
  {
    auto dbl = cfg;
    dbl.architecture = agent::Architecture::kDouble;
    const agent::ScriptedBackend b({
        {Module::kGeneration, {}, 1, {}, call("get_relations(head_entities=[Entity(name=\"Semaglutide\")])")},
        {Module::kGeneration, {}, {}, {}, propose("treat")},
        {Module::kEvaluation, {}, 1, {}, call("get_triplets(tail_entities=[Entity(name=\"Obesity\")])")},
        {Module::kEvaluation, {}, {}, {}, assess(40)},
        {Module::kExtractor, {}, {}, {}, propose("treat")},
    });
    agent::Episode ep(sema, dbl, tools, b);
    const auto r = ep.run();
    if (!r.ok) return "(c) episode failed: " + r.error;
    std::size_t cross = 0, checked = 0;
    for (const auto& ctx : ep.contexts()) {
      if (ctx.module == Module::kExtractor) continue;
      for (auto i : ctx.entries) {
        ++checked;
        cross += ep.memory().entries()[i].module != ctx.module;
      }
    }
    if (cross != 0) return "(c) " + std::to_string(cross) + " cross-module entries";
    if (checked == 0) return "(c) no prompt contexts recorded";
  }
  {
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"MESH:C000591245", "MESH:D003924"}, {"MESH:D008687", "MESH:D003924"}, {"NCBI:7124", "MESH:D003924"},
        {"rs7903146", "MESH:D003922"},       {"MESH:D005947", "MESH:D003920"}, {"MESH:D007328", "MESH:D003924"},
        {"MESH:D001241", "MESH:D006973"},    {"MESH:D008687", "MESH:D009765"}, {"MESH:C000591245", "MESH:D009765"},
        {"NCBI:7124", "MESH:D007333"}};
    std::vector<agent::QueryCase> cases;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      cases.push_back(query_case(*store, pairs[i].first, pairs[i].second, "case_" + std::to_string(i)));
    }
    const agent::ScriptedBackend b({
        {Module::kGeneration, 1, 1, {}, call("get_relations(head_entities=[Entity(name=\"Metformin\")])")},
        {Module::kGeneration, {}, {}, std::string("\"Evaluation Score\": \"45\""), propose("cause")},
        {Module::kGeneration, {}, {}, {}, propose("treat")},
        {Module::kEvaluation, {}, 1, {}, call("get_articles(text_description='glucose insulin', limit=3)")},
        {Module::kEvaluation, {}, {}, std::string("Metformin"), assess(90)},
        {Module::kEvaluation, {}, {}, {}, assess(45)},
        {Module::kExtractor, {}, {}, {}, propose("treat")},
    });
    auto bytes = [&](const agent::QueryCase& q) {
      agent::Episode ep(q, cfg, tools, b);
      ep.run();
      std::ostringstream out;
      agent::write_trace(out, ep.memory(), ep.result());
      out << agent::to_json(ep.result()).dump();
      return out.str();
    };
    auto suite = [&](std::size_t threads) {
      std::vector<std::string> out(cases.size());
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
          for (std::size_t i; (i = next++) < cases.size();) out[i] = bytes(cases[i]);
        });
      }
      for (auto& t : pool) t.join();
      return out;
    };
    const auto base = suite(1);
    for (const auto& s : base) {
      if (s.find("\"ok\":true") == std::string::npos) return "(d) an episode of the suite failed";
    }
    for (int rep = 0; rep < 5; ++rep) {
      if (suite(1) != base) return "(d) run " + std::to_string(rep) + " differs at parallelism 1";
    }
    if (suite(4) != base) return "(d) parallelism 4 differs from parallelism 1";
  }
  return {};
}

// ---- 6: metrics ----

std::string metrics() {
  std::mt19937 rng(20240106);
  const auto g = fixtures::random_graph_with_records(rng, 20, 50);
  if (g.kb.records().size() != 50) return "knowledge base has " + std::to_string(g.kb.records().size()) + " records";
  std::set<std::pair<int, int>> pairs;
  for (const auto& [s, r, o] : g.edges) {
    if (pairs.size() == 5) break;
    pairs.insert({s, o});
  }
  std::uniform_int_distribution<int> pick(0, 19);
  while (pairs.size() < 10) {
    const int s = pick(rng), o = pick(rng);
    if (s != o) pairs.insert({s, o});
  }
  if (kb::all_relation_types().size() != 12) return "expected 12 relation types";
  for (const auto& [s, o] : pairs) {
    std::set<kb::RelationType> truth;
    for (auto t : kb::all_relation_types()) {
      if (std::bernoulli_distribution(0.3)(rng)) truth.insert(t);
    }
    const eval::TestCase c{"c", {fixtures::gene_id(s), "", kb::EntityType::kGene},
                           {fixtures::gene_id(o), "", kb::EntityType::kGene}, truth, {}, {}};
    for (auto rel : kb::all_relation_types()) {
      const kb::TripletKey key{fixtures::gene_id(s), rel, fixtures::gene_id(o)};
      const int novel = g.edges.count({s, std::string(kb::to_string(rel)), o}) ? 0 : 1;
      if (eval::novelty_r(g.kb, key) != novel) return "novelty_r differs for " + key.subject_id + " " + key.object_id;
      if (eval::alignment_r(c, key) != (truth.count(rel) ? 1 : 0)) return "alignment_r differs";
    }
  }

  std::vector<eval::CaseRow> rows;
  for (int n : {1, 0, 1, 1}) {
    eval::CaseRow r;
    r.run.ok = true;
    r.run.proposal = agent::Propose{kb::RelationType::kTreat, "d"};
    r.novelty_r = n;
    rows.push_back(r);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *eval::aggregate(rows).novelty_r);
  if (std::string(buf) != "75.00") return std::string("aggregate([1,0,1,1]) = ") + buf;

  const auto store = fixtures::desk_store();
  const auto cases = eval::load_test_set_file(fixtures::data("desk/tests.jsonl"), store->kb());
  const std::string ok = "```json\n{\"Novelty Score\": \"70\", \"Alignment Score\": 50}\n```";
  auto judge = [&](std::vector<std::string> replies) {
    std::vector<Rule> rules;
    for (std::size_t i = 0; i < replies.size(); ++i) {
      rules.push_back({Module::kJudge, std::nullopt, static_cast<int>(i + 1), std::nullopt, replies[i]});
    }
    eval::JudgeOptions opt;
    opt.retry.retries = 0;
    return eval::judge_descriptions(agent::ScriptedBackend(rules), cases[0], "d", *store, {}, opt);
  };
  const auto exact = judge({ok});
  if (exact.attempts != 1 || exact.novelty_d != 70 || exact.alignment_d != 50) return "judge exact path";
  const auto reask = judge({"no scores", ok});
  if (reask.attempts != 2 || reask.missing() || reask.novelty_d != 70) return "judge re-ask path";
  const auto missing = judge({"no scores", "still none", ok});
  if (missing.attempts != 2 || !missing.missing()) return "judge missing path";
  return {};
}

// ---- 7: prompts ----

std::string golden_prompts() {
  const agent::PromptParams p = {
      {"api_description", "<API DESCRIPTION>"},
      {"max_outer_iterations", "3"},
      {"max_inner_iterations", "10"},
      {"evaluation_threshold", "50"},
      {"max_retries", "1"},
      {"entity1_name", "Insulin"},
      {"entity2_name", "Diabetes Mellitus"},
      {"entity1_type", "Entity_Type.CHEMICAL"},
      {"entity2_type", "Entity_Type.DISEASE"},
      {"current_proposal", "{\"Relation\": \"treat\", \"Hypothesis Description\": \"Insulin treats diabetes.\"}"},
      {"scratchpad", "<SCRATCHPAD>"},
      {"proposed_hypothesis_description", "Insulin treats diabetes."},
      {"related_past_literature", "<RELATED PAST LITERATURE>"},
      {"ground_truth_literature", "<GROUND TRUTH LITERATURE>"},
  };
  const std::pair<agent::TemplateId, const char*> cases[] = {
      {agent::TemplateId::kGenerationSystem, "generation_system.txt"},
      {agent::TemplateId::kEvaluationSystem, "evaluation_system.txt"},
      {agent::TemplateId::kEvaluationQuery, "evaluation_query.txt"},
      {agent::TemplateId::kJudge, "judge.txt"},
  };
  for (const auto& [id, file] : cases) {
    if (agent::render_prompt(id, p) != fixtures::slurp(fixtures::golden(file))) {
      return std::string(file) + " differs";
    }
  }
  return {};
}

// ---- 8: desk end to end ----

std::string desk_end_to_end() {
  fixtures::TempDir tmp("acceptance");
  if (auto f = fixtures::desk_ingest(tmp.path()); !f.empty()) return f;
  auto svc = std::make_shared<service::QueryService>(query::KnowledgeStore::open(tmp / "kb"));
  service::HttpServer server(svc);
  const int port = server.bind("127.0.0.1", 0);
  std::thread listener([&] { server.listen(); });
  server.wait_until_ready();
  const auto outcome = fixtures::desk_run_eval(tmp.path(), "http://127.0.0.1:" + std::to_string(port));
  server.stop();
  listener.join();
  if (!outcome.aggregate) return outcome.failure;
  if (outcome.aggregate->value("cases", 0) != 5) return "expected 5 episodes";
  return fixtures::compare_desk(*outcome.aggregate);
}

std::string describe_error(const std::exception& e) { return std::string("exception: ") + e.what(); }

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "validity matrix matches the hand table on 972 combinations with 26 class pairs", 1.0, validity_matrix},
      {2, "1000-line corpus matches the ingest oracle and snapshots round-trip bit-identically", 5.0,
       ingest_and_snapshot},
      {3, "path lengths equal breadth-first distances on 100 random graphs; MeSH relations are symmetric", 30.0,
       graph_paths},
      {4, "five retrieval operations match the linear-scan oracle on 200 random filters", 30.0, retrieval_ops},
      {5, "agent threshold, extractor, isolation and determinism under scripted backends", 10.0, agent_runtime},
      {6, "novelty, alignment, aggregation and judge parsing", 5.0, metrics},
      {7, "generation, evaluation and judge prompts byte-match the golden files", 0.0, golden_prompts},
      {8, "desk pipeline through the service reproduces the hand-computed aggregates", 60.0, desk_end_to_end},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      failure = c.check();
    } catch (const std::exception& e) {
      failure = describe_error(e);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty() && c.limit_seconds > 0 && secs >= c.limit_seconds) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "took %.2fs, limit %.0fs", secs, c.limit_seconds);
      failure = buf;
    }
    char timing[64];
    if (c.limit_seconds > 0) {
      std::snprintf(timing, sizeof timing, "%.2fs < %.0fs", secs, c.limit_seconds);
    } else {
      std::snprintf(timing, sizeof timing, "%.2fs", secs);
    }
    if (failure.empty()) {
      std::printf("PASS criterion %d: %s [%s]\n", c.number, c.name.c_str(), timing);
    } else {
      ++failed;
      std::printf("FAIL criterion %d: %s [%s]: %s\n", c.number, c.name.c_str(), timing, failure.c_str());
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
