#include "hypoforge/kb/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "hypoforge/error.hpp"
#include "hypoforge/kb/validity.hpp"

namespace hypoforge::kb {

using nlohmann::json;

class KnowledgeBaseBuilder {
 public:
  static KnowledgeBase build(Date cutoff, std::vector<HypothesisRecord> records,
                             std::map<Pmid, Article> articles) {
    KnowledgeBase kb;
    kb.cutoff_ = cutoff;
    std::sort(records.begin(), records.end(),
              [](const HypothesisRecord& a, const HypothesisRecord& b) {
                return a.key() < b.key();
              });
    for (const auto& r : records) {
      kb.entities_.try_emplace(r.triplet.subject.id, r.triplet.subject);
      kb.entities_.try_emplace(r.triplet.object.id, r.triplet.object);
    }
    kb.records_ = std::move(records);
    kb.articles_ = std::move(articles);
    return kb;
  }
};

namespace {

bool get_string(const json& obj, const char* key, std::string& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    out.clear();
    return true;
  }
  if (!it->is_string()) return false;
  out = it->get<std::string>();
  return true;
}

std::optional<Entity> parse_entity(const json& obj, const char* id_key, const char* name_key,
                                   const char* type_key, std::string& reason) {
  Entity e;
  if (!get_string(obj, id_key, e.id) || e.id.empty()) {
    reason = std::string("missing or non-string ") + id_key;
    return std::nullopt;
  }
  if (!get_string(obj, name_key, e.name)) {
    reason = std::string("non-string ") + name_key;
    return std::nullopt;
  }
  std::string type_text;
  if (!get_string(obj, type_key, type_text)) {
    reason = std::string("non-string ") + type_key;
    return std::nullopt;
  }
  auto type = parse_entity_type(type_text);
  if (!type) {
    reason = "unknown entity type '" + type_text + "'";
    return std::nullopt;
  }
  e.type = *type;
  return e;
}

bool entity_named(const Entity& e) { return is_mutation_class(e.type) || !e.name.empty(); }

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

std::optional<RawTriplet> parse_triplet_line(const std::string& line, std::string& reason) {
  json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    reason = "not a JSON object";
    return std::nullopt;
  }
  RawTriplet raw;
  auto subject = parse_entity(obj, "subject_id", "subject_name", "subject_type", reason);
  if (!subject) return std::nullopt;
  auto object = parse_entity(obj, "object_id", "object_name", "object_type", reason);
  if (!object) return std::nullopt;
  std::string rel_text;
  if (!get_string(obj, "relation", rel_text)) {
    reason = "non-string relation";
    return std::nullopt;
  }
  auto relation = parse_relation(rel_text);
  if (!relation) {
    reason = "unknown relation '" + rel_text + "'";
    return std::nullopt;
  }
  auto pm = obj.find("pmids");
  if (pm != obj.end() && !pm->is_null()) {
    if (!pm->is_array()) {
      reason = "pmids is not an array";
      return std::nullopt;
    }
    for (const auto& v : *pm) {
      if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
        reason = "pmids must be positive integers";
        return std::nullopt;
      }
      raw.pmids.push_back(Pmid{v.get<std::int64_t>()});
    }
  }
  raw.triplet = Triplet{std::move(*subject), *relation, std::move(*object)};
  return raw;
}

ArticleCatalogResult read_article_catalog(std::istream& in) {
  ArticleCatalogResult out;
  auto& rep = out.report;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    ++rep.article_lines;
    auto reject = [&](std::size_t& counter, std::string reason) {
      ++counter;
      rep.rejections.push_back({"articles", lineno, std::move(reason)});
    };
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      reject(rep.malformed_articles, "not a JSON object");
      continue;
    }
    auto pm = obj.find("pmid");
    if (pm == obj.end() || !pm->is_number_integer() || pm->get<std::int64_t>() <= 0) {
      reject(rep.malformed_articles, "pmid must be a positive integer");
      continue;
    }
    Article a;
    a.pmid = Pmid{pm->get<std::int64_t>()};
    std::string date_text;
    if (!get_string(obj, "title", a.title) || !get_string(obj, "abstract", a.abstract_text) ||
        !get_string(obj, "journal", a.journal) || !get_string(obj, "pub_date", date_text)) {
      reject(rep.malformed_articles, "non-string text field");
      continue;
    }
    if (date_text.empty()) {
      reject(rep.missing_date, "missing pub_date");
      continue;
    }
    auto date = Date::parse(date_text);
    if (!date) {
      reject(rep.malformed_articles, "unparseable pub_date '" + date_text + "'");
      continue;
    }
    a.pub_date = *date;
    if (a.title.empty() && a.abstract_text.empty()) {
      reject(rep.missing_text, "missing title and abstract");
      continue;
    }
    if (out.articles.contains(a.pmid)) {
      reject(rep.duplicate_article, "duplicate pmid " + std::to_string(to_int(a.pmid)));
      continue;
    }
    out.articles.emplace(a.pmid, std::move(a));
  }
  return out;
}

MergeResult merge_records(std::span<const RawTriplet> group,
                          const std::map<Pmid, Article>& articles) {
  MergeResult out;
  if (group.empty()) return out;
  HypothesisRecord rec;
  rec.triplet = group.front().triplet;
  std::optional<Date> earliest;
  for (const auto& raw : group) {
    for (Pmid p : raw.pmids) {
      auto it = articles.find(p);
      if (it == articles.end()) {
        ++out.unresolved_pmids;
        continue;
      }
      rec.pmids.insert(p);
      if (!earliest || it->second.pub_date < *earliest) earliest = it->second.pub_date;
    }
  }
  if (rec.pmids.empty()) return out;
  rec.discovery_date = *earliest;
  out.record = std::move(rec);
  return out;
}

IngestResult ingest(std::istream& triplets, std::istream& articles, const Date& cutoff) {
  auto catalog = read_article_catalog(articles);
  IngestReport rep = std::move(catalog.report);

  // Group surviving raws by directed identity; first-seen order of raws is
  // kept within a group so the first raw supplies entity display names.
  std::map<TripletKey, std::vector<RawTriplet>> groups;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(triplets, line)) {
    ++lineno;
    if (blank(line)) continue;
    ++rep.triplet_lines;
    std::string reason;
    auto raw = parse_triplet_line(line, reason);
    if (!raw) {
      ++rep.malformed_triplets;
      rep.rejections.push_back({"triplets", lineno, reason});
      continue;
    }
    raw->line = lineno;
    const auto& t = raw->triplet;
    if (!validate_pair(t.relation, t.subject.type, t.object.type)) {
      ++rep.invalid_pair;
      rep.rejections.push_back({"triplets", lineno, "invalid entity pair for relation"});
      continue;
    }
    if (!entity_named(t.subject) || !entity_named(t.object)) {
      ++rep.missing_name;
      rep.rejections.push_back({"triplets", lineno, "missing entity name"});
      continue;
    }
    groups[key_of(t)].push_back(std::move(*raw));
  }

  std::vector<HypothesisRecord> kept;
  for (auto& [key, group] : groups) {
    rep.records_merged += group.size() - 1;
    auto merged = merge_records(group, catalog.articles);
    rep.unresolved_pmids += merged.unresolved_pmids;
    if (!merged.record) {
      ++rep.no_articles;
      rep.rejections.push_back({"triplets", group.front().line, "no supporting articles"});
      continue;
    }
    auto& rec = *merged.record;
    if (!(rec.discovery_date < cutoff)) {
      ++rep.past_cutoff;
      continue;
    }
    // Only pre-cutoff articles enter the knowledge base.
    std::erase_if(rec.pmids, [&](Pmid p) { return !(catalog.articles.at(p).pub_date < cutoff); });
    kept.push_back(std::move(rec));
  }
  rep.records_kept = kept.size();

  std::map<Pmid, Article> kb_articles;
  for (auto& [pmid, article] : catalog.articles) {
    if (article.pub_date < cutoff) {
      kb_articles.emplace(pmid, std::move(article));
    } else {
      ++rep.articles_past_cutoff;
    }
  }
  rep.articles_kept = kb_articles.size();

  std::stable_sort(rep.rejections.begin(), rep.rejections.end(),
                   [](const Rejection& a, const Rejection& b) {
                     return std::tie(a.source, a.line) < std::tie(b.source, b.line);
                   });
  return {KnowledgeBaseBuilder::build(cutoff, std::move(kept), std::move(kb_articles)),
          std::move(rep)};
}

IngestResult ingest_files(const std::filesystem::path& triplets,
                          const std::filesystem::path& articles, const Date& cutoff) {
  std::ifstream t(triplets);
  if (!t) throw Error(ErrorCode::kIo, "cannot open triplet file " + triplets.string());
  std::ifstream a(articles);
  if (!a) throw Error(ErrorCode::kIo, "cannot open article file " + articles.string());
  return ingest(t, a, cutoff);
}

}  // namespace hypoforge::kb
