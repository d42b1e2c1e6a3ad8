#include "hypoforge/query/retrieval.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "hypoforge/error.hpp"

namespace hypoforge::query {

using kb::HypothesisRecord;
using kb::Pmid;
using kb::RelationType;

namespace {

void check_limit(const QueryFilter& f) {
  if (f.limit < 1) throw Error(ErrorCode::kInvalidFilter, "limit must be at least 1");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct RecordConstraint {
  std::optional<std::set<std::string>> head;
  std::optional<std::set<std::string>> tail;
  std::optional<std::set<RelationType>> relations;
  std::optional<std::set<Pmid>> pmids;

  bool matches(const HypothesisRecord& r) const {
    if (head && !head->contains(r.triplet.subject.id)) return false;
    if (tail && !tail->contains(r.triplet.object.id)) return false;
    if (relations && !relations->contains(r.triplet.relation)) return false;
    if (pmids && std::none_of(r.pmids.begin(), r.pmids.end(),
                              [&](Pmid p) { return pmids->contains(p); })) {
      return false;
    }
    return true;
  }
};

RecordConstraint constraint_of(const KnowledgeStore& store, const QueryFilter& f,
                               bool with_relations, bool with_pmids) {
  RecordConstraint c;
  if (f.has_head()) c.head = store.resolve_all(f.head_entities);
  if (f.has_tail()) c.tail = store.resolve_all(f.tail_entities);
  if (with_relations && f.has_relations()) {
    c.relations = std::set<RelationType>(f.relations.begin(), f.relations.end());
  }
  if (with_pmids && f.has_pmids()) c.pmids = std::set<Pmid>(f.pmids.begin(), f.pmids.end());
  return c;
}

// Indexes into kb().records() of matching records, ascending (= key order).
std::vector<std::size_t> matching_records(const KnowledgeStore& store, const RecordConstraint& c) {
  std::vector<std::size_t> candidates;
  if (c.pmids) {
    for (auto p : *c.pmids) {
      const auto& v = store.records_with_pmid(p);
      candidates.insert(candidates.end(), v.begin(), v.end());
    }
  } else if (c.head) {
    for (const auto& id : *c.head) {
      const auto& v = store.records_with_subject(id);
      candidates.insert(candidates.end(), v.begin(), v.end());
    }
  } else if (c.tail) {
    for (const auto& id : *c.tail) {
      const auto& v = store.records_with_object(id);
      candidates.insert(candidates.end(), v.begin(), v.end());
    }
  } else {
    candidates.resize(store.kb().records().size());
    for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i] = i;
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  const auto& records = store.kb().records();
  std::erase_if(candidates, [&](std::size_t i) { return !c.matches(records[i]); });
  return candidates;
}

template <typename T>
void truncate(std::vector<T>& v, std::size_t limit) {
  if (v.size() > limit) v.resize(limit);
}

kb::EntityType type_from_tree_numbers(const graph::MeshTree& mesh, const std::string& id) {
  if (mesh.contains(id)) {
    const auto& numbers = mesh.tree_numbers(id);
    if (!numbers.empty() && numbers.begin()->front() == 'C') return kb::EntityType::kDisease;
  }
  return kb::EntityType::kChemical;
}

kb::Entity entity_or_stub(const KnowledgeStore& store, const std::string& id) {
  if (const auto* e = store.kb().find_entity(id)) return *e;
  // MeSH-only entity outside the triplet catalog: no display name.
  return kb::Entity{id, "", type_from_tree_numbers(store.mesh(), id)};
}

}  // namespace

std::vector<ScoredEntity> get_entities(const KnowledgeStore& store, const QueryFilter& filter) {
  check_limit(filter);
  if (!filter.has_text() && !filter.has_head() && !filter.has_tail()) {
    throw Error(ErrorCode::kInvalidFilter,
                "get_entities needs text_description or head/tail entities");
  }
  std::vector<ScoredEntity> out;
  if (!filter.has_text()) {
    std::set<std::string> ids = store.resolve_all(filter.head_entities);
    ids.merge(store.resolve_all(filter.tail_entities));
    for (const auto& id : ids) out.push_back({*store.kb().find_entity(id), 0.0});
    truncate(out, filter.limit);
    return out;
  }

  std::set<kb::EntityType> types;
  for (const auto* refs : {&filter.head_entities, &filter.tail_entities}) {
    for (const auto& r : *refs) {
      if (r.type) types.insert(*r.type);
    }
  }
  const auto& order = store.entity_order();
  const std::string wanted = lowercase(trim(filter.text_description));
  struct Candidate {
    bool exact;
    double score;
    std::size_t ordinal;
  };
  std::map<std::size_t, double> scored;
  for (const auto& [doc, s] : store.entity_index().scores(filter.text_description)) {
    if (s > 0.0) scored.emplace(static_cast<std::size_t>(doc), s);
  }
  for (const auto& id : store.resolve(EntityRef{std::nullopt, wanted, std::nullopt})) {
    auto it = std::lower_bound(order.begin(), order.end(), id,
                               [](const kb::Entity* e, const std::string& k) { return e->id < k; });
    scored.try_emplace(static_cast<std::size_t>(it - order.begin()), 0.0);
  }
  std::vector<Candidate> cands;
  for (const auto& [ordinal, s] : scored) {
    const auto* e = order[ordinal];
    if (!types.empty() && !types.contains(e->type)) continue;
    cands.push_back({lowercase(e->name) == wanted, s, ordinal});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.exact != b.exact) return a.exact;
    if (a.score != b.score) return a.score > b.score;
    return a.ordinal < b.ordinal;
  });
  truncate(cands, filter.limit);
  for (const auto& c : cands) out.push_back({*order[c.ordinal], c.score});
  return out;
}

std::vector<RelationCount> get_relations(const KnowledgeStore& store, const QueryFilter& filter) {
  check_limit(filter);
  if (!filter.has_head() && !filter.has_tail()) {
    throw Error(ErrorCode::kInvalidFilter, "get_relations needs head_entities or tail_entities");
  }
  const auto c = constraint_of(store, filter, false, false);
  std::map<RelationType, std::size_t> counts;
  for (auto i : matching_records(store, c)) ++counts[store.kb().records()[i].triplet.relation];
  std::vector<RelationCount> out;
  for (const auto& [rel, n] : counts) out.push_back({rel, n});
  std::sort(out.begin(), out.end(), [](const RelationCount& a, const RelationCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return kb::to_string(a.relation) < kb::to_string(b.relation);
  });
  truncate(out, filter.limit);
  return out;
}

std::vector<ScoredRecord> get_triplets(const KnowledgeStore& store, const QueryFilter& filter) {
  check_limit(filter);
  if (filter.empty()) throw Error(ErrorCode::kInvalidFilter, "get_triplets needs a filter");
  const auto c = constraint_of(store, filter, true, true);
  const auto& records = store.kb().records();
  const auto idx = matching_records(store, c);

  struct Item {
    double score;
    std::size_t index;
  };
  std::vector<Item> items;
  if (filter.has_text()) {
    const auto article_scores = store.article_index().scores(filter.text_description);
    for (auto i : idx) {
      double best = 0.0;
      for (auto p : records[i].pmids) {
        auto it = article_scores.find(static_cast<DocId>(kb::to_int(p)));
        if (it != article_scores.end()) best = std::max(best, it->second);
      }
      items.push_back({best, i});
    }
  } else {
    for (auto i : idx) items.push_back({static_cast<double>(records[i].pmids.size()), i});
  }
  // Record indexes are in key order, so index order breaks ties by identity.
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.score > b.score; });
  truncate(items, filter.limit);
  std::vector<ScoredRecord> out;
  for (const auto& it : items) out.push_back({records[it.index], it.score});
  return out;
}

std::vector<ScoredPmid> get_articles(const KnowledgeStore& store, const QueryFilter& filter) {
  check_limit(filter);
  if (filter.empty()) throw Error(ErrorCode::kInvalidFilter, "get_articles needs a filter");
  std::set<Pmid> pool;
  if (filter.has_head() || filter.has_tail() || filter.has_relations()) {
    const auto c = constraint_of(store, filter, true, false);
    for (auto i : matching_records(store, c)) {
      const auto& pm = store.kb().records()[i].pmids;
      pool.insert(pm.begin(), pm.end());
    }
  } else {
    for (const auto& [p, a] : store.kb().articles()) pool.insert(p);
  }
  if (filter.has_pmids()) {
    const std::set<Pmid> wanted(filter.pmids.begin(), filter.pmids.end());
    std::erase_if(pool, [&](Pmid p) { return !wanted.contains(p); });
  }
  std::vector<RankedHit> hits;
  std::map<DocId, double> scores;
  if (filter.has_text()) scores = store.article_index().scores(filter.text_description);
  for (auto p : pool) {
    const auto doc = static_cast<DocId>(kb::to_int(p));
    auto it = scores.find(doc);
    hits.push_back({doc, it == scores.end() ? 0.0 : it->second});
  }
  sort_ranked(hits);
  truncate(hits, filter.limit);
  std::vector<ScoredPmid> out;
  for (const auto& h : hits) out.push_back({Pmid{static_cast<std::int64_t>(h.id)}, h.score});
  return out;
}

BrowseResult browse_articles(const KnowledgeStore& store, const std::vector<Pmid>& pmids) {
  if (pmids.empty()) throw Error(ErrorCode::kInvalidFilter, "browse_articles needs pmids");
  BrowseResult out;
  for (auto p : pmids) {
    if (const auto* a = store.kb().find_article(p)) {
      out.articles.push_back(*a);
    } else {
      out.missing.push_back(p);
    }
  }
  if (out.articles.empty()) throw Error(ErrorCode::kNotFound, "none of the requested pmids exist");
  return out;
}

kb::Entity resolve_entity(const KnowledgeStore& store, const EntityRef& ref) {
  const auto ids = store.resolve(ref);
  if (ids.empty()) {
    // MeSH-only ids are addressable by id even outside the triplet catalog.
    if (ref.id && store.mesh().contains(*ref.id)) return entity_or_stub(store, *ref.id);
    throw Error(ErrorCode::kNotFound,
                "unknown entity '" + (ref.id ? *ref.id : ref.name) + "'" +
                    (ref.type ? std::string(" of type ") + std::string(kb::to_string(*ref.type))
                              : std::string()));
  }
  return *store.kb().find_entity(ids.front());
}

std::vector<PathResult> shortest_paths(const KnowledgeStore& store, const std::string& src_id,
                                       const std::string& dst_id, std::size_t max_paths,
                                       std::size_t max_hops) {
  std::vector<PathResult> out;
  for (const auto& path : graph::shortest_entity_paths(store.graph(), src_id, dst_id, max_paths,
                                                       max_hops)) {
    PathResult res;
    for (const auto& step : path) {
      res.push_back({entity_or_stub(store, step.entity_id), step.relation, step.reversed});
    }
    out.push_back(std::move(res));
  }
  return out;
}

std::vector<kb::Entity> mesh_neighbors(const KnowledgeStore& store, const std::string& entity_id,
                                       MeshDirection direction) {
  std::vector<std::string> ids;
  switch (direction) {
    case MeshDirection::kParents: ids = store.mesh().parents(entity_id); break;
    case MeshDirection::kChildren: ids = store.mesh().children(entity_id); break;
    case MeshDirection::kSiblings: ids = store.mesh().siblings(entity_id); break;
  }
  std::vector<kb::Entity> out;
  for (const auto& id : ids) out.push_back(entity_or_stub(store, id));
  return out;
}

EntityDescription describe_entity(const KnowledgeStore& store, const std::string& entity_id) {
  const auto* e = store.kb().find_entity(entity_id);
  if (!e && !store.mesh().contains(entity_id)) {
    throw Error(ErrorCode::kNotFound, "unknown entity '" + entity_id + "'");
  }
  EntityDescription d;
  d.entity = entity_or_stub(store, entity_id);
  d.as_subject = store.records_with_subject(entity_id).size();
  d.as_object = store.records_with_object(entity_id).size();
  if (store.mesh().contains(entity_id)) {
    const auto& n = store.mesh().tree_numbers(entity_id);
    d.tree_numbers.assign(n.begin(), n.end());
  }
  return d;
}

}  // namespace hypoforge::query
