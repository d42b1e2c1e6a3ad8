#include <cmath>
#include <memory>

#include "compare.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "hypoforge/error.hpp"
#include "hypoforge/kb/ingest.hpp"
#include "hypoforge/query/access.hpp"
#include "hypoforge/query/json.hpp"
#include "hypoforge/query/render.hpp"
#include "oracles.hpp"
#include "random_filter.hpp"

using namespace hypoforge;
using query::EntityRef;
using query::QueryFilter;

namespace {

std::shared_ptr<const query::KnowledgeStore> open_store(const std::string& name) {
  auto res = kb::ingest_files(fixtures::data(name + "/triplets.jsonl"), fixtures::data(name + "/articles.jsonl"),
                              kb::Date{2024, 1, 1});
  return std::make_shared<const query::KnowledgeStore>(
      std::move(res.kb), graph::MeshTree::load_file(fixtures::data(name + "/mesh.jsonl")));
}

const query::KnowledgeStore& synthetic() {
  static const auto store = open_store("synthetic");
  return *store;
}

const query::KnowledgeStore& desk() {
  static const auto store = open_store("desk");
  return *store;
}

EntityRef by_name(std::string name) { return EntityRef{std::nullopt, std::move(name), std::nullopt}; }
EntityRef by_id(std::string id) { return EntityRef{std::move(id), "", std::nullopt}; }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kContract;
}

}  // namespace

TEST_CASE("tokenizer lowercases and splits on punctuation") {
  CHECK(query::tokenize("TNF-alpha, IL6 a B2!") == std::vector<std::string>{"tnf", "alpha", "il6", "b2"});
  CHECK(query::tokenize("").empty());
  CHECK(query::tokenize("caf\xc3\xa9 x") == std::vector<std::string>{"caf"});
}

TEST_CASE("text scores equal the brute-force formula") {
  query::TextIndex idx;
  const std::vector<std::string> docs = {"insulin glucose insulin", "glucose uptake", "tumour necrosis factor", ""};
  for (std::size_t i = 0; i < docs.size(); ++i) idx.add(i + 1, docs[i]);
  std::map<std::string, std::size_t> df;
  std::vector<std::vector<std::string>> toks;
  for (const auto& d : docs) {
    toks.push_back(oracle::tokens(d));
    for (const auto& t : std::set<std::string>(toks.back().begin(), toks.back().end())) ++df[t];
  }
  for (const std::string q : {"insulin", "glucose insulin", "Glucose, glucose", "factor unknown", "zzz"}) {
    for (std::size_t i = 0; i < docs.size(); ++i) {
      CHECK(idx.score(q, i + 1) == oracle::tfidf(oracle::tokens(q), toks[i], docs.size(), df));
    }
  }
  CHECK(idx.score("insulin", 1) == doctest::Approx(2 * std::log(1.0 + 4.0 / 1.0)));
  const auto hits = idx.rank("glucose insulin");
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].id == 1);
  CHECK(hits[1].id == 2);
  CHECK_THROWS_AS(idx.score("x", 99), Error);
  CHECK_THROWS_AS(idx.add(2, "late"), Error);
}

TEST_CASE("retrieval ops agree with the linear-scan oracle on random filters") {
  const auto& store = synthetic();
  const oracle::LinearQuery ref(store.kb());
  fixtures::FilterGenerator gen(store.kb(), 1234);
  for (int i = 0; i < 200; ++i) {
    const auto f = gen.next();
    CAPTURE(i);
    CAPTURE(query::to_json(f).dump());
    CHECK(fixtures::agree<query::ScoredEntity>([&] { return query::get_entities(store, f); },
                                               [&] { return ref.get_entities(f); }) == "");
    CHECK(fixtures::agree<query::RelationCount>([&] { return query::get_relations(store, f); },
                                                [&] { return ref.get_relations(f); }) == "");
    CHECK(fixtures::agree<query::ScoredRecord>([&] { return query::get_triplets(store, f); },
                                               [&] { return ref.get_triplets(f); }) == "");
    CHECK(fixtures::agree<query::ScoredPmid>([&] { return query::get_articles(store, f); },
                                             [&] { return ref.get_articles(f); }) == "");
  }
}

TEST_CASE("entity search puts exact names first") {
  const auto& store = desk();
  QueryFilter f;
  f.text_description = "insulin";
  const auto hits = query::get_entities(store, f);
  REQUIRE(hits.size() >= 2);
  CHECK(hits[0].entity.name == "Insulin");
  CHECK(hits[1].entity.name == "Insulin Resistance");

  f.text_description = "diabetes mellitus";
  f.head_entities = {EntityRef{std::nullopt, "", kb::EntityType::kChemical}};
  CHECK(query::get_entities(store, f).empty());

  QueryFilter bad;
  CHECK(code_of([&] { query::get_entities(store, bad); }) == ErrorCode::kInvalidFilter);
  bad.text_description = "x";
  bad.limit = 0;
  CHECK(code_of([&] { query::get_entities(store, bad); }) == ErrorCode::kInvalidFilter);
}

TEST_CASE("relation counts for a known pair") {
  const auto& store = desk();
  QueryFilter f;
  f.head_entities = {by_name("metformin")};
  const auto rels = query::get_relations(store, f);
  REQUIRE(rels.size() == 3);
  CHECK(rels[0].relation == kb::RelationType::kTreat);
  CHECK(rels[0].count == 2);
  CHECK(rels[1].relation == kb::RelationType::kCotreat);
  CHECK(rels[2].relation == kb::RelationType::kNegativeCorrelate);
  CHECK(code_of([&] { query::get_relations(store, QueryFilter{}); }) == ErrorCode::kInvalidFilter);
}

TEST_CASE("triplets rank by support without text") {
  const auto& store = desk();
  QueryFilter f;
  f.tail_entities = {by_id("MESH:D003924")};
  const auto recs = query::get_triplets(store, f);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].record.triplet.subject.name == "Metformin");
  CHECK(recs[0].score == 2.0);
  for (std::size_t i = 2; i < recs.size(); ++i) CHECK(recs[i - 1].record.key() < recs[i].record.key());
}

TEST_CASE("articles are restricted by entities and pmids") {
  const auto& store = desk();
  QueryFilter f;
  f.head_entities = {by_name("Metformin")};
  f.pmids = {kb::Pmid{101}, kb::Pmid{109}};
  const auto arts = query::get_articles(store, f);
  REQUIRE(arts.size() == 1);
  CHECK(arts[0].pmid == kb::Pmid{101});

  QueryFilter all;
  all.text_description = "glucose";
  all.limit = 100;
  const auto ranked = query::get_articles(store, all);
  CHECK(ranked.size() == store.kb().articles().size());
  CHECK(ranked.front().score > 0);
  CHECK(ranked.back().score == 0);
}

TEST_CASE("browse keeps request order and reports missing pmids") {
  const auto& store = desk();
  const auto res = query::browse_articles(store, {kb::Pmid{105}, kb::Pmid{7}, kb::Pmid{101}});
  REQUIRE(res.articles.size() == 2);
  CHECK(res.articles[0].pmid == kb::Pmid{105});
  CHECK(res.missing == std::vector<kb::Pmid>{kb::Pmid{7}});
  CHECK(code_of([&] { query::browse_articles(store, {}); }) == ErrorCode::kInvalidFilter);
  CHECK(code_of([&] { query::browse_articles(store, {kb::Pmid{7}}); }) == ErrorCode::kNotFound);
  const auto text = query::render(res);
  CHECK(text.find("1. PMID 105 (") == 0);
  CHECK(text.find("Unknown PMIDs: 7") != std::string::npos);
}

TEST_CASE("entity resolution, description and MeSH neighbours") {
  const auto& store = desk();
  CHECK(query::resolve_entity(store, by_name("tnf")).id == "NCBI:7124");
  CHECK(code_of([&] { query::resolve_entity(store, EntityRef{std::nullopt, "TNF", kb::EntityType::kDisease}); }) ==
        ErrorCode::kNotFound);
  // MeSH-only ids resolve to an unnamed stub.
  const auto stub = query::resolve_entity(store, by_id("MESH:D044882"));
  CHECK(stub.name.empty());
  CHECK(stub.type == kb::EntityType::kDisease);

  const auto d = query::describe_entity(store, "MESH:D003924");
  CHECK(d.entity.name == "Diabetes Mellitus, Type 2");
  CHECK(d.as_subject == 1);
  CHECK(d.as_object == 3);
  CHECK(d.tree_numbers == std::vector<std::string>{"C18.452.394.750.149", "C19.246.300"});

  const auto parents = query::mesh_neighbors(store, "MESH:D003924", query::MeshDirection::kParents);
  REQUIRE(parents.size() == 1);
  CHECK(parents[0].name == "Diabetes Mellitus");
  const auto sibs = query::mesh_neighbors(store, "MESH:D003924", query::MeshDirection::kSiblings);
  REQUIRE(sibs.size() == 1);
  CHECK(sibs[0].id == "MESH:D003922");
  CHECK(code_of([&] { query::mesh_neighbors(store, "NCBI:7124", query::MeshDirection::kChildren); }) ==
        ErrorCode::kNotFound);
}

TEST_CASE("paths go through the store with display entities") {
  const auto& store = desk();
  const auto paths = query::shortest_paths(store, "MESH:C000591245", "MESH:D003924", 5, 4);
  REQUIRE_FALSE(paths.empty());
  for (const auto& p : paths) {
    CHECK(p.front().entity.name == "Semaglutide");
    CHECK(p.back().entity.name == "Diabetes Mellitus, Type 2");
  }
  const auto text = query::render(paths);
  CHECK(text.find("1. Semaglutide [chemical, id=MESH:C000591245]") == 0);
}

TEST_CASE("rendering uses numbered lines with fixed score precision") {
  CHECK(query::format_score(1.0 / 3.0) == "0.3333");
  CHECK(query::render(std::vector<query::ScoredPmid>{}) == "No results.");
  std::vector<query::RelationCount> rc = {{kb::RelationType::kTreat, 3}, {kb::RelationType::kCause, 1}};
  CHECK(query::render(rc) == "1. treat: 3 triplet(s) (score=3.0000)\n2. cause: 1 triplet(s) (score=1.0000)");
  const kb::Entity v{"rs1", "", kb::EntityType::kSnp};
  CHECK(query::entity_label(v) == "rs1 [snp, id=rs1]");
}

TEST_CASE("wire forms round trip") {
  const auto& store = desk();
  QueryFilter f;
  f.head_entities = {by_name("Metformin"), EntityRef{"MESH:D007328", "", kb::EntityType::kChemical}};
  f.relations = {kb::RelationType::kTreat};
  f.pmids = {kb::Pmid{101}};
  f.text_description = "glucose";
  f.limit = 7;
  const auto back = query::filter_from_json(query::to_json(f));
  CHECK(back.head_entities == f.head_entities);
  CHECK(back.relations == f.relations);
  CHECK(back.pmids == f.pmids);
  CHECK(back.text_description == f.text_description);
  CHECK(back.limit == 7);

  QueryFilter g;
  g.tail_entities = {by_id("MESH:D003924")};
  for (const auto& r : query::get_triplets(store, g)) {
    CHECK(fixtures::same(query::scored_record_from_json(query::to_json(r)), r));
  }
  for (const auto& p : query::shortest_paths(store, "MESH:C000591245", "MESH:D003924", 5, 4)) {
    const auto back_path = query::path_from_json(query::to_json(p));
    REQUIRE(back_path.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(back_path[i].entity == p[i].entity);
      CHECK(back_path[i].relation == p[i].relation);
      CHECK(back_path[i].reversed == p[i].reversed);
    }
  }
  CHECK_THROWS_AS(query::filter_from_json(nlohmann::json{{"limit", "ten"}}), Error);
  CHECK_THROWS_AS(query::filter_from_json(nlohmann::json{{"relations", {"heals"}}}), Error);
}

TEST_CASE("local access forwards to the store") {
  auto store = open_store("desk");
  const query::LocalAccess access(store);
  CHECK(access.contains({"MESH:D008687", kb::RelationType::kTreat, "MESH:D003924"}, kb::Orientation::kDirected));
  CHECK_FALSE(access.contains({"MESH:D003924", kb::RelationType::kTreat, "MESH:D008687"}, kb::Orientation::kDirected));
  CHECK(access.contains({"MESH:D003924", kb::RelationType::kTreat, "MESH:D008687"}, kb::Orientation::kUndirected));
  CHECK(access.shortest_paths("MESH:C000591245", "MESH:D003924", 2).size() <= 2);
}
