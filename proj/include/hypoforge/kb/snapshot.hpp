#pragma once

#include <filesystem>
#include <iosfwd>

#include <nlohmann/json.hpp>

#include "hypoforge/kb/ingest.hpp"
#include "hypoforge/kb/knowledge_base.hpp"

namespace hypoforge::kb {

// Snapshot layout: triplets.jsonl (one line per record, raw triplet schema),
// articles.jsonl, manifest.json, and optionally mesh.jsonl copied verbatim.
inline constexpr const char* kTripletsFile = "triplets.jsonl";
inline constexpr const char* kArticlesFile = "articles.jsonl";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kMeshFile = "mesh.jsonl";

nlohmann::json triplet_line_json(const HypothesisRecord& record);
nlohmann::json article_json(const Article& article);
nlohmann::json entity_json(const Entity& entity);
nlohmann::json record_json(const HypothesisRecord& record);
nlohmann::json report_json(const IngestReport& report);

void write_triplets(const KnowledgeBase& kb, std::ostream& out);
void write_articles(const KnowledgeBase& kb, std::ostream& out);

// Writes the snapshot. A non-empty `mesh_source` is copied to mesh.jsonl.
void write_snapshot(const KnowledgeBase& kb, const std::filesystem::path& dir,
                    const std::filesystem::path& mesh_source = {});

// Re-ingests the snapshot files and checks the manifest counts.
KnowledgeBase load_snapshot(const std::filesystem::path& dir);

}  // namespace hypoforge::kb
