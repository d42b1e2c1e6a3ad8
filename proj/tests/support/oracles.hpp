#pragma once

// Test-side reference implementations. They share no code with the library
// beyond plain data types and are written for clarity, not speed.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hypoforge/kb/knowledge_base.hpp"
#include "hypoforge/query/filter.hpp"
#include "hypoforge/query/results.hpp"

namespace oracle {

// Relation validity written out by hand from the relation table.
bool valid_pair(const std::string& relation, const std::string& subject_type,
                const std::string& object_type);
const std::vector<std::string>& relation_names();
const std::vector<std::string>& entity_type_names();
// Distinct (relation, subject class, object class) triples.
std::size_t valid_class_pair_count();

struct IngestCounts {
  std::size_t triplet_lines = 0, article_lines = 0;
  std::size_t malformed_articles = 0, missing_date = 0, missing_text = 0, duplicate_article = 0;
  std::size_t articles_past_cutoff = 0, articles_kept = 0;
  std::size_t malformed_triplets = 0, invalid_pair = 0, missing_name = 0, records_merged = 0;
  std::size_t no_articles = 0, past_cutoff = 0, records_kept = 0, unresolved_pmids = 0;

  bool operator==(const IngestCounts&) const = default;
};

using Key = std::tuple<std::string, std::string, std::string>;  // subject, relation, object

struct IngestOutcome {
  IngestCounts counts;
  // Kept records: pre-cutoff pmids and discovery date "YYYY-MM-DD".
  std::map<Key, std::pair<std::set<std::int64_t>, std::string>> records;
};

IngestOutcome naive_ingest(const std::string& triplets_path, const std::string& articles_path,
                           const std::string& cutoff);

IngestCounts counts_of(const hypoforge::kb::IngestReport& r);
std::string describe(const IngestCounts& c);

// Hop distances over an undirected adjacency list; -1 when unreachable.
std::vector<int> bfs(const std::vector<std::vector<int>>& adj, int src);

// Every simple path of minimum length between two nodes, by exhaustive DFS.
std::vector<std::vector<int>> all_shortest_simple_paths(const std::vector<std::vector<int>>& adj,
                                                        int src, int dst);

// Linear-scan retrieval over a knowledge base.
class LinearQuery {
 public:
  explicit LinearQuery(const hypoforge::kb::KnowledgeBase& kb);

  std::vector<hypoforge::query::ScoredEntity> get_entities(const hypoforge::query::QueryFilter& f) const;
  std::vector<hypoforge::query::RelationCount> get_relations(const hypoforge::query::QueryFilter& f) const;
  std::vector<hypoforge::query::ScoredRecord> get_triplets(const hypoforge::query::QueryFilter& f) const;
  std::vector<hypoforge::query::ScoredPmid> get_articles(const hypoforge::query::QueryFilter& f) const;
  // nullopt where the library is expected to reject the request.
  std::optional<hypoforge::query::BrowseResult> browse(const std::vector<hypoforge::kb::Pmid>& pmids) const;

  double article_score(const std::string& query, std::int64_t pmid) const;
  double entity_score(const std::string& query, const std::string& entity_id) const;

 private:
  std::set<std::string> resolve(const std::vector<hypoforge::query::EntityRef>& refs) const;

  const hypoforge::kb::KnowledgeBase& kb_;
  std::map<std::int64_t, std::vector<std::string>> article_tokens_;
  std::map<std::string, std::vector<std::string>> entity_tokens_;
  std::map<std::string, std::size_t> article_df_;
  std::map<std::string, std::size_t> entity_df_;
};

std::vector<std::string> tokens(const std::string& text);
// sum over sorted distinct query tokens of tf * log(1 + N / df).
double tfidf(const std::vector<std::string>& query, const std::vector<std::string>& doc,
             std::size_t n_docs, const std::map<std::string, std::size_t>& df);

}  // namespace oracle
