#include "hypoforge/query/text_index.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "hypoforge/error.hpp"

namespace hypoforge::query {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2) out.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 128 && std::isalnum(u)) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

namespace {

std::set<std::string> query_terms(std::string_view query) {
  auto tokens = tokenize(query);
  return {tokens.begin(), tokens.end()};
}

const std::vector<Posting> kNoPostings;

}  // namespace

void TextIndex::add(DocId doc, std::string_view text) {
  if (!doc_tokens_.empty() && doc <= doc_tokens_.rbegin()->first) {
    throw Error(ErrorCode::kInvalidArgument, "text index documents must be added in id order");
  }
  auto& terms = doc_terms_[doc];
  const auto tokens = tokenize(text);
  for (const auto& t : tokens) ++terms[t];
  doc_tokens_[doc] = tokens.size();
  for (const auto& [token, tf] : terms) postings_[token].push_back({doc, tf});
}

std::size_t TextIndex::token_count(DocId doc) const {
  auto it = doc_tokens_.find(doc);
  return it == doc_tokens_.end() ? 0 : it->second;
}

const std::vector<Posting>& TextIndex::postings(const std::string& token) const {
  auto it = postings_.find(token);
  return it == postings_.end() ? kNoPostings : it->second;
}

double TextIndex::idf(const std::string& token) const {
  const auto df = document_frequency(token);
  return std::log(1.0 + static_cast<double>(document_count()) / static_cast<double>(df));
}

double TextIndex::score(std::string_view query, DocId doc) const {
  auto it = doc_terms_.find(doc);
  if (it == doc_terms_.end()) {
    throw Error(ErrorCode::kNotFound, "document " + std::to_string(doc) + " is not indexed");
  }
  double total = 0.0;
  for (const auto& t : query_terms(query)) {
    auto tf = it->second.find(t);
    if (tf == it->second.end()) continue;
    total += static_cast<double>(tf->second) * idf(t);
  }
  return total;
}

std::map<DocId, double> TextIndex::scores(std::string_view query) const {
  std::map<DocId, double> acc;
  for (const auto& t : query_terms(query)) {
    const auto& plist = postings(t);
    if (plist.empty()) continue;
    const double w = idf(t);
    for (const auto& p : plist) acc[p.doc] += static_cast<double>(p.tf) * w;
  }
  return acc;
}

std::vector<RankedHit> TextIndex::rank(std::string_view query) const {
  std::vector<RankedHit> hits;
  for (const auto& [doc, s] : scores(query)) {
    if (s > 0.0) hits.push_back({doc, s});
  }
  sort_ranked(hits);
  return hits;
}

void sort_ranked(std::vector<RankedHit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const RankedHit& a, const RankedHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
}

}  // namespace hypoforge::query
