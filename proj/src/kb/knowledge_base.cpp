#include "hypoforge/kb/knowledge_base.hpp"

#include <algorithm>

namespace hypoforge::kb {

const HypothesisRecord* KnowledgeBase::find(const TripletKey& key) const {
  auto it = std::lower_bound(records_.begin(), records_.end(), key,
                             [](const HypothesisRecord& r, const TripletKey& k) {
                               return r.key() < k;
                             });
  if (it == records_.end() || it->key() != key) return nullptr;
  return &*it;
}

const Entity* KnowledgeBase::find_entity(const std::string& id) const {
  auto it = entities_.find(id);
  return it == entities_.end() ? nullptr : &it->second;
}

const Article* KnowledgeBase::find_article(Pmid pmid) const {
  auto it = articles_.find(pmid);
  return it == articles_.end() ? nullptr : &it->second;
}

bool contains(const KnowledgeBase& kb, const TripletKey& key, Orientation orientation) {
  if (kb.find(key) != nullptr) return true;
  if (orientation == Orientation::kUndirected) {
    return kb.find(TripletKey{key.object_id, key.relation, key.subject_id}) != nullptr;
  }
  return false;
}

bool contains(const KnowledgeBase& kb, const Triplet& t, Orientation orientation) {
  return contains(kb, key_of(t), orientation);
}

}  // namespace hypoforge::kb
