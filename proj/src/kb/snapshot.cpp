#include "hypoforge/kb/snapshot.hpp"

#include <fstream>
#include <sstream>

#include "hypoforge/error.hpp"

namespace hypoforge::kb {

using nlohmann::json;

json triplet_line_json(const HypothesisRecord& record) {
  const auto& t = record.triplet;
  json pmids = json::array();
  for (Pmid p : record.pmids) pmids.push_back(to_int(p));
  return json{{"subject_id", t.subject.id},
              {"subject_name", t.subject.name},
              {"subject_type", to_string(t.subject.type)},
              {"relation", to_string(t.relation)},
              {"object_id", t.object.id},
              {"object_name", t.object.name},
              {"object_type", to_string(t.object.type)},
              {"pmids", std::move(pmids)}};
}

json article_json(const Article& a) {
  return json{{"pmid", to_int(a.pmid)},
              {"title", a.title},
              {"abstract", a.abstract_text},
              {"pub_date", a.pub_date.to_string()},
              {"journal", a.journal}};
}

json entity_json(const Entity& e) {
  return json{{"id", e.id}, {"name", e.name}, {"entity_type", to_string(e.type)}};
}

json record_json(const HypothesisRecord& record) {
  json pmids = json::array();
  for (Pmid p : record.pmids) pmids.push_back(to_int(p));
  return json{{"subject", entity_json(record.triplet.subject)},
              {"relation", to_string(record.triplet.relation)},
              {"object", entity_json(record.triplet.object)},
              {"pmids", std::move(pmids)},
              {"discovery_date", record.discovery_date.to_string()}};
}

json report_json(const IngestReport& r) {
  json rejections = json::array();
  for (const auto& rej : r.rejections) {
    rejections.push_back({{"source", rej.source}, {"line", rej.line}, {"reason", rej.reason}});
  }
  return json{{"triplet_lines", r.triplet_lines},
              {"article_lines", r.article_lines},
              {"malformed_articles", r.malformed_articles},
              {"missing_date", r.missing_date},
              {"missing_text", r.missing_text},
              {"duplicate_article", r.duplicate_article},
              {"articles_past_cutoff", r.articles_past_cutoff},
              {"articles_kept", r.articles_kept},
              {"malformed_triplets", r.malformed_triplets},
              {"invalid_pair", r.invalid_pair},
              {"missing_name", r.missing_name},
              {"records_merged", r.records_merged},
              {"no_articles", r.no_articles},
              {"past_cutoff", r.past_cutoff},
              {"records_kept", r.records_kept},
              {"unresolved_pmids", r.unresolved_pmids},
              {"rejections", std::move(rejections)}};
}

void write_triplets(const KnowledgeBase& kb, std::ostream& out) {
  for (const auto& r : kb.records()) out << triplet_line_json(r).dump() << '\n';
}

void write_articles(const KnowledgeBase& kb, std::ostream& out) {
  for (const auto& [pmid, a] : kb.articles()) out << article_json(a).dump() << '\n';
}

namespace {

json manifest_json(const KnowledgeBase& kb) {
  return json{{"cutoff", kb.cutoff().to_string()},
              {"counts",
               {{"records", kb.records().size()},
                {"articles", kb.articles().size()},
                {"entities", kb.entities().size()}}}};
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + p.string());
  return out;
}

}  // namespace

void write_snapshot(const KnowledgeBase& kb, const std::filesystem::path& dir,
                    const std::filesystem::path& mesh_source) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  {
    auto out = open_out(dir / kTripletsFile);
    write_triplets(kb, out);
  }
  {
    auto out = open_out(dir / kArticlesFile);
    write_articles(kb, out);
  }
  {
    auto out = open_out(dir / kManifestFile);
    out << manifest_json(kb).dump(2) << '\n';
  }
  if (!mesh_source.empty()) {
    std::filesystem::copy_file(mesh_source, dir / kMeshFile,
                               std::filesystem::copy_options::overwrite_existing, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot copy MeSH file: " + ec.message());
  }
}

KnowledgeBase load_snapshot(const std::filesystem::path& dir) {
  std::ifstream mf(dir / kManifestFile);
  if (!mf) throw Error(ErrorCode::kIo, "missing manifest in " + dir.string());
  json manifest = json::parse(mf, nullptr, false);
  if (manifest.is_discarded() || !manifest.contains("cutoff") ||
      !manifest["cutoff"].is_string()) {
    throw Error(ErrorCode::kParse, "malformed manifest in " + dir.string());
  }
  auto cutoff = Date::parse(manifest["cutoff"].get<std::string>());
  if (!cutoff) throw Error(ErrorCode::kParse, "malformed manifest cutoff");
  auto result = ingest_files(dir / kTripletsFile, dir / kArticlesFile, *cutoff);
  if (manifest_json(result.kb)["counts"] != manifest["counts"]) {
    throw Error(ErrorCode::kValidation,
                "snapshot contents disagree with manifest counts in " + dir.string());
  }
  return std::move(result.kb);
}

}  // namespace hypoforge::kb
