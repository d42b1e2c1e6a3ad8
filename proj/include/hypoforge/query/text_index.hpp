#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hypoforge::query {

using DocId = std::uint64_t;

// Lowercase ASCII, split on non-alphanumerics, drop tokens shorter than 2.
std::vector<std::string> tokenize(std::string_view text);

struct Posting {
  DocId doc = 0;
  std::uint32_t tf = 0;
};

struct RankedHit {
  DocId id = 0;
  double score = 0.0;
};

// Inverted index with a TF-IDF style score:
//   score(q, d) = sum over distinct query tokens t (in lexicographic order)
//                 of tf(t, d) * log(1 + N / df(t)).
// Summation order is fixed so scores are bit-identical across runs.
class TextIndex {
 public:
  // Documents must be added with strictly increasing ids.
  void add(DocId doc, std::string_view text);

  std::size_t document_count() const { return doc_tokens_.size(); }
  std::size_t token_count(DocId doc) const;
  bool contains(DocId doc) const { return doc_terms_.contains(doc); }

  // Sorted by doc; empty for unknown tokens.
  const std::vector<Posting>& postings(const std::string& token) const;
  std::size_t document_frequency(const std::string& token) const {
    return postings(token).size();
  }

  // Throws Error(kNotFound) for unindexed documents.
  double score(std::string_view query, DocId doc) const;

  // Scores for every document sharing at least one token with the query.
  std::map<DocId, double> scores(std::string_view query) const;

  // Documents with positive score, by descending score then ascending id.
  std::vector<RankedHit> rank(std::string_view query) const;

 private:
  double idf(const std::string& token) const;

  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::map<DocId, std::map<std::string, std::uint32_t>> doc_terms_;
  std::map<DocId, std::size_t> doc_tokens_;
};

// Shared ordering for ranked lists: score descending, then id ascending.
void sort_ranked(std::vector<RankedHit>& hits);

}  // namespace hypoforge::query
