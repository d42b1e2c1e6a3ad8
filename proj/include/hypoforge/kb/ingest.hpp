#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypoforge/kb/knowledge_base.hpp"
#include "hypoforge/kb/types.hpp"

namespace hypoforge::kb {

// One raw assertion as read from a triplet JSONL line.
struct RawTriplet {
  Triplet triplet;
  std::vector<Pmid> pmids;
  std::size_t line = 0;
};

struct Rejection {
  std::string source;  // "triplets" | "articles"
  std::size_t line = 0;
  std::string reason;
};

struct IngestReport {
  std::size_t triplet_lines = 0;
  std::size_t article_lines = 0;

  // Article filters.
  std::size_t malformed_articles = 0;
  std::size_t missing_date = 0;
  std::size_t missing_text = 0;
  std::size_t duplicate_article = 0;
  std::size_t articles_past_cutoff = 0;
  std::size_t articles_kept = 0;

  // Triplet filters, in pipeline order. For every triplet line:
  // malformed + invalid_pair + missing_name + records_merged + no_articles
  //   + past_cutoff + records_kept == triplet_lines.
  std::size_t malformed_triplets = 0;
  std::size_t invalid_pair = 0;
  std::size_t missing_name = 0;
  std::size_t records_merged = 0;
  std::size_t no_articles = 0;
  std::size_t past_cutoff = 0;
  std::size_t records_kept = 0;

  // pmid references dropped because no admitted article carries them.
  std::size_t unresolved_pmids = 0;

  std::vector<Rejection> rejections;
};

struct MergeResult {
  std::optional<HypothesisRecord> record;  // empty when no pmid resolves
  std::size_t unresolved_pmids = 0;
};

// Folds raw assertions sharing one directed identity into a single record:
// pmids are unioned and the discovery date is the earliest publication date.
MergeResult merge_records(std::span<const RawTriplet> group,
                          const std::map<Pmid, Article>& articles);

struct IngestResult {
  KnowledgeBase kb;
  IngestReport report;
};

// Pipeline: article filtering, triplet validity/name filtering, merge,
// no-article discard, cutoff split. Malformed lines are tallied and skipped.
IngestResult ingest(std::istream& triplets, std::istream& articles, const Date& cutoff);

// Throws Error(kIo) if either file cannot be opened.
IngestResult ingest_files(const std::filesystem::path& triplets,
                          const std::filesystem::path& articles, const Date& cutoff);

// Triplet-line parsing shared with test-set construction. Returns nullopt
// and fills `reason` for malformed lines.
std::optional<RawTriplet> parse_triplet_line(const std::string& line, std::string& reason);

// Article admission shared with test-set construction (no cutoff applied).
struct ArticleCatalogResult {
  std::map<Pmid, Article> articles;
  IngestReport report;
};
ArticleCatalogResult read_article_catalog(std::istream& in);

}  // namespace hypoforge::kb
