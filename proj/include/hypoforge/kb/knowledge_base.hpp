#pragma once

#include <map>
#include <string>
#include <vector>

#include "hypoforge/kb/types.hpp"

namespace hypoforge::kb {

struct IngestReport;

// Immutable store of merged pre-cutoff hypothesis records and the articles
// that support them. Only produced by ingest().
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  const Date& cutoff() const { return cutoff_; }

  // Sorted by directed identity key.
  const std::vector<HypothesisRecord>& records() const { return records_; }
  const std::map<std::string, Entity>& entities() const { return entities_; }
  const std::map<Pmid, Article>& articles() const { return articles_; }

  const HypothesisRecord* find(const TripletKey& key) const;
  const Entity* find_entity(const std::string& id) const;
  const Article* find_article(Pmid pmid) const;

 private:
  friend class KnowledgeBaseBuilder;

  Date cutoff_;
  std::vector<HypothesisRecord> records_;
  std::map<std::string, Entity> entities_;
  std::map<Pmid, Article> articles_;
};

enum class Orientation { kDirected, kUndirected };

// Membership of a triplet in the knowledge base. Under kUndirected the
// reverse orientation (object, relation, subject) also counts as known.
bool contains(const KnowledgeBase& kb, const Triplet& t,
              Orientation orientation = Orientation::kDirected);
bool contains(const KnowledgeBase& kb, const TripletKey& key,
              Orientation orientation = Orientation::kDirected);

}  // namespace hypoforge::kb
