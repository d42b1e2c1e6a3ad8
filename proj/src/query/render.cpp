#include "hypoforge/query/render.hpp"

#include <cstdio>
#include <set>
#include <sstream>

namespace hypoforge::query {

namespace {

constexpr const char* kNoResults = "No results.";

template <typename Items, typename Fn>
std::string numbered(const Items& items, Fn&& line) {
  if (items.empty()) return kNoResults;
  std::ostringstream out;
  std::size_t rank = 0;
  for (const auto& item : items) {
    if (rank > 0) out << '\n';
    out << ++rank << ". " << line(item);
  }
  return out.str();
}

std::string pmid_list(const std::set<kb::Pmid>& pmids) {
  std::string s = "[";
  bool first = true;
  for (auto p : pmids) {
    if (!first) s += ", ";
    s += std::to_string(kb::to_int(p));
    first = false;
  }
  return s + "]";
}

}  // namespace

std::string format_score(double score) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", score);
  return buf;
}

std::string entity_label(const kb::Entity& e) {
  std::string name = e.name.empty() ? e.id : e.name;
  return name + " [" + std::string(kb::to_string(e.type)) + ", id=" + e.id + "]";
}

std::string render(const std::vector<ScoredEntity>& items) {
  return numbered(items, [](const ScoredEntity& e) {
    return entity_label(e.entity) + " (score=" + format_score(e.score) + ")";
  });
}

std::string render(const std::vector<RelationCount>& items) {
  return numbered(items, [](const RelationCount& r) {
    return std::string(kb::to_string(r.relation)) + ": " + std::to_string(r.count) +
           " triplet(s) (score=" + format_score(static_cast<double>(r.count)) + ")";
  });
}

std::string render(const std::vector<ScoredRecord>& items) {
  return numbered(items, [](const ScoredRecord& r) {
    const auto& t = r.record.triplet;
    return "(" + entity_label(t.subject) + ", " + std::string(kb::to_string(t.relation)) + ", " +
           entity_label(t.object) + ") pmids=" + pmid_list(r.record.pmids) +
           " discovered=" + r.record.discovery_date.to_string() +
           " (score=" + format_score(r.score) + ")";
  });
}

std::string render(const std::vector<ScoredPmid>& items) {
  return numbered(items, [](const ScoredPmid& p) {
    return "PMID " + std::to_string(kb::to_int(p.pmid)) + " (score=" + format_score(p.score) + ")";
  });
}

std::string render(const BrowseResult& result) {
  std::string out = numbered(result.articles, [](const kb::Article& a) {
    std::string meta = a.pub_date.to_string();
    if (!a.journal.empty()) meta += ", " + a.journal;
    return "PMID " + std::to_string(kb::to_int(a.pmid)) + " (" + meta + ") Title: " + a.title +
           " Abstract: " + a.abstract_text + " (score=" + format_score(0.0) + ")";
  });
  if (!result.missing.empty()) {
    out += "\nUnknown PMIDs:";
    for (auto p : result.missing) out += " " + std::to_string(kb::to_int(p));
  }
  return out;
}

std::string render(const std::vector<PathResult>& paths) {
  return numbered(paths, [](const PathResult& path) {
    std::string s;
    for (const auto& n : path) {
      if (n.relation) {
        const std::string rel(kb::to_string(*n.relation));
        s += n.reversed ? " <-[" + rel + "]- " : " -[" + rel + "]-> ";
      }
      s += entity_label(n.entity);
    }
    const auto hops = path.empty() ? 0 : path.size() - 1;
    return s + " (score=" + format_score(static_cast<double>(hops)) + ")";
  });
}

std::string render(const std::vector<kb::Entity>& entities) {
  return numbered(entities, [](const kb::Entity& e) {
    return entity_label(e) + " (score=" + format_score(0.0) + ")";
  });
}

std::string render(const EntityDescription& d) {
  std::ostringstream out;
  out << "Entity: " << (d.entity.name.empty() ? d.entity.id : d.entity.name) << '\n'
      << "ID: " << d.entity.id << '\n'
      << "Type: " << kb::to_string(d.entity.type) << '\n'
      << "Triplets as subject: " << d.as_subject << '\n'
      << "Triplets as object: " << d.as_object << '\n'
      << "MeSH tree numbers:";
  if (d.tree_numbers.empty()) out << " none";
  for (const auto& n : d.tree_numbers) out << ' ' << n;
  return out.str();
}

}  // namespace hypoforge::query
