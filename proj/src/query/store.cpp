#include "hypoforge/query/store.hpp"

#include <algorithm>
#include <cctype>

#include "hypoforge/kb/snapshot.hpp"

namespace hypoforge::query {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool QueryFilter::has_text() const {
  return text_description.find_first_not_of(" \t\r\n") != std::string::npos;
}

KnowledgeStore::KnowledgeStore(kb::KnowledgeBase kb, graph::MeshTree mesh)
    : kb_(std::move(kb)), mesh_(std::move(mesh)), graph_(graph::KnowledgeGraph::build(kb_)) {
  for (const auto& [pmid, a] : kb_.articles()) {
    article_index_.add(static_cast<DocId>(kb::to_int(pmid)), a.title + " " + a.abstract_text);
  }
  for (const auto& [id, e] : kb_.entities()) {
    entity_index_.add(entity_order_.size(), e.name);
    entity_order_.push_back(&e);
    by_lower_name_[lowercase(e.name)].push_back(&e);
  }
  const auto& records = kb_.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    by_subject_[r.triplet.subject.id].push_back(i);
    by_object_[r.triplet.object.id].push_back(i);
    for (auto p : r.pmids) by_pmid_[p].push_back(i);
  }
}

std::shared_ptr<const KnowledgeStore> KnowledgeStore::open(const std::filesystem::path& snapshot) {
  auto kb = kb::load_snapshot(snapshot);
  graph::MeshTree mesh;
  if (std::filesystem::exists(snapshot / kb::kMeshFile)) {
    mesh = graph::MeshTree::load_file(snapshot / kb::kMeshFile);
  }
  return std::make_shared<const KnowledgeStore>(std::move(kb), std::move(mesh));
}

namespace {

const std::vector<std::size_t> kNone;

template <typename Map, typename Key>
const std::vector<std::size_t>& lookup(const Map& m, const Key& k) {
  auto it = m.find(k);
  return it == m.end() ? kNone : it->second;
}

}  // namespace

const std::vector<std::size_t>& KnowledgeStore::records_with_subject(const std::string& id) const {
  return lookup(by_subject_, id);
}

const std::vector<std::size_t>& KnowledgeStore::records_with_object(const std::string& id) const {
  return lookup(by_object_, id);
}

const std::vector<std::size_t>& KnowledgeStore::records_with_pmid(kb::Pmid pmid) const {
  return lookup(by_pmid_, pmid);
}

std::vector<std::string> KnowledgeStore::resolve(const EntityRef& ref) const {
  std::vector<std::string> out;
  auto type_ok = [&](const kb::Entity& e) { return !ref.type || e.type == *ref.type; };
  if (ref.id) {
    if (const auto* e = kb_.find_entity(*ref.id); e && type_ok(*e)) out.push_back(e->id);
    return out;
  }
  auto it = by_lower_name_.find(lowercase(ref.name));
  if (ref.name.empty() || it == by_lower_name_.end()) return out;
  for (const auto* e : it->second) {
    if (type_ok(*e)) out.push_back(e->id);
  }
  return out;  // entity_order_ is id-sorted, so this is too
}

std::set<std::string> KnowledgeStore::resolve_all(const std::vector<EntityRef>& refs) const {
  std::set<std::string> out;
  for (const auto& r : refs) {
    for (auto& id : resolve(r)) out.insert(std::move(id));
  }
  return out;
}

}  // namespace hypoforge::query
