#include "hypoforge/query/json.hpp"

#include "hypoforge/error.hpp"
#include "hypoforge/kb/snapshot.hpp"

namespace hypoforge::query {

using nlohmann::json;

namespace {

[[noreturn]] void bad_filter(const std::string& msg) { throw Error(ErrorCode::kInvalidFilter, msg); }
[[noreturn]] void bad_payload(const std::string& msg) { throw Error(ErrorCode::kParse, msg); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad_payload(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string string_field(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) bad_payload(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

kb::EntityType type_field(const json& j, const char* key) {
  auto t = kb::parse_entity_type(string_field(j, key));
  if (!t) bad_payload(std::string("unknown entity type in '") + key + "'");
  return *t;
}

kb::RelationType relation_value(const json& v) {
  if (!v.is_string()) bad_payload("relation must be a string");
  auto r = kb::parse_relation(v.get<std::string>());
  if (!r) bad_payload("unknown relation '" + v.get<std::string>() + "'");
  return *r;
}

std::vector<kb::Pmid> pmid_list(const json& v) {
  if (!v.is_array()) bad_payload("pmids must be an array");
  std::vector<kb::Pmid> out;
  for (const auto& p : v) {
    if (!p.is_number_integer()) bad_payload("pmids must be integers");
    out.push_back(kb::Pmid{p.get<std::int64_t>()});
  }
  return out;
}

std::optional<kb::RelationType> optional_relation(const json& j) {
  if (!j.contains("relation") || j["relation"].is_null()) return std::nullopt;
  return relation_value(j["relation"]);
}

}  // namespace

json to_json(const EntityRef& ref) {
  json j{{"name", ref.name}};
  if (ref.id) j["id"] = *ref.id;
  if (ref.type) j["entity_type"] = kb::to_string(*ref.type);
  return j;
}

json to_json(const QueryFilter& f) {
  json j = json::object();
  auto refs = [](const std::vector<EntityRef>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back(to_json(r));
    return a;
  };
  if (f.has_head()) j["head_entities"] = refs(f.head_entities);
  if (f.has_tail()) j["tail_entities"] = refs(f.tail_entities);
  if (f.has_relations()) {
    j["relations"] = json::array();
    for (auto r : f.relations) j["relations"].push_back(kb::to_string(r));
  }
  if (f.has_pmids()) {
    j["pmids"] = json::array();
    for (auto p : f.pmids) j["pmids"].push_back(kb::to_int(p));
  }
  if (!f.text_description.empty()) j["text_description"] = f.text_description;
  j["limit"] = f.limit;
  return j;
}

EntityRef entity_ref_from_json(const json& j) {
  EntityRef ref;
  if (j.is_string()) {
    ref.name = j.get<std::string>();
    return ref;
  }
  if (!j.is_object()) bad_filter("entity must be an object or a name string");
  if (j.contains("id") && !j["id"].is_null()) {
    if (!j["id"].is_string()) bad_filter("entity id must be a string");
    ref.id = j["id"].get<std::string>();
  }
  if (j.contains("name") && !j["name"].is_null()) {
    if (!j["name"].is_string()) bad_filter("entity name must be a string");
    ref.name = j["name"].get<std::string>();
  }
  if (j.contains("entity_type") && !j["entity_type"].is_null()) {
    if (!j["entity_type"].is_string()) bad_filter("entity_type must be a string");
    auto t = kb::parse_entity_type(j["entity_type"].get<std::string>());
    if (!t) bad_filter("unknown entity_type '" + j["entity_type"].get<std::string>() + "'");
    ref.type = t;
  }
  if (!ref.id && ref.name.empty()) bad_filter("entity needs an id or a name");
  return ref;
}

QueryFilter filter_from_json(const json& j) {
  if (!j.is_object()) bad_filter("filter must be a JSON object");
  QueryFilter f;
  auto refs = [&](const char* key, std::vector<EntityRef>& out) {
    if (!j.contains(key) || j[key].is_null()) return;
    if (!j[key].is_array()) bad_filter(std::string(key) + " must be an array");
    for (const auto& e : j[key]) out.push_back(entity_ref_from_json(e));
  };
  refs("head_entities", f.head_entities);
  refs("tail_entities", f.tail_entities);
  if (j.contains("relations") && !j["relations"].is_null()) {
    if (!j["relations"].is_array()) bad_filter("relations must be an array");
    for (const auto& r : j["relations"]) {
      if (!r.is_string()) bad_filter("relations must be strings");
      auto rel = kb::parse_relation(r.get<std::string>());
      if (!rel) bad_filter("unknown relation '" + r.get<std::string>() + "'");
      f.relations.push_back(*rel);
    }
  }
  if (j.contains("pmids") && !j["pmids"].is_null()) {
    if (!j["pmids"].is_array()) bad_filter("pmids must be an array");
    for (const auto& p : j["pmids"]) {
      if (!p.is_number_integer()) bad_filter("pmids must be integers");
      f.pmids.push_back(kb::Pmid{p.get<std::int64_t>()});
    }
  }
  if (j.contains("text_description") && !j["text_description"].is_null()) {
    if (!j["text_description"].is_string()) bad_filter("text_description must be a string");
    f.text_description = j["text_description"].get<std::string>();
  }
  if (j.contains("limit") && !j["limit"].is_null()) {
    if (!j["limit"].is_number_integer() || j["limit"].get<std::int64_t>() < 1) {
      bad_filter("limit must be an integer >= 1");
    }
    f.limit = j["limit"].get<std::size_t>();
  }
  return f;
}

json to_json(const kb::Entity& e) { return kb::entity_json(e); }

kb::Entity entity_from_json(const json& j) {
  return kb::Entity{string_field(j, "id"), string_field(j, "name"), type_field(j, "entity_type")};
}

json to_json(const ScoredEntity& e) { return {{"entity", to_json(e.entity)}, {"score", e.score}}; }

ScoredEntity scored_entity_from_json(const json& j) {
  return {entity_from_json(field(j, "entity")), field(j, "score").get<double>()};
}

json to_json(const RelationCount& r) {
  return {{"relation", kb::to_string(r.relation)}, {"count", r.count}};
}

RelationCount relation_count_from_json(const json& j) {
  return {relation_value(field(j, "relation")), field(j, "count").get<std::size_t>()};
}

json to_json(const ScoredRecord& r) {
  return {{"record", kb::record_json(r.record)}, {"score", r.score}};
}

ScoredRecord scored_record_from_json(const json& j) {
  const auto& r = field(j, "record");
  ScoredRecord out;
  out.record.triplet.subject = entity_from_json(field(r, "subject"));
  out.record.triplet.relation = relation_value(field(r, "relation"));
  out.record.triplet.object = entity_from_json(field(r, "object"));
  for (auto p : pmid_list(field(r, "pmids"))) out.record.pmids.insert(p);
  auto d = kb::Date::parse(string_field(r, "discovery_date"));
  if (!d) bad_payload("malformed discovery_date");
  out.record.discovery_date = *d;
  out.score = field(j, "score").get<double>();
  return out;
}

json to_json(const ScoredPmid& p) { return {{"pmid", kb::to_int(p.pmid)}, {"score", p.score}}; }

ScoredPmid scored_pmid_from_json(const json& j) {
  return {kb::Pmid{field(j, "pmid").get<std::int64_t>()}, field(j, "score").get<double>()};
}

json to_json(const kb::Article& a) { return kb::article_json(a); }

kb::Article article_from_json(const json& j) {
  kb::Article a;
  a.pmid = kb::Pmid{field(j, "pmid").get<std::int64_t>()};
  a.title = string_field(j, "title");
  a.abstract_text = string_field(j, "abstract");
  a.journal = string_field(j, "journal");
  auto d = kb::Date::parse(string_field(j, "pub_date"));
  if (!d) bad_payload("malformed pub_date");
  a.pub_date = *d;
  return a;
}

json to_json(const PathResult& path) {
  json steps = json::array();
  for (const auto& n : path) {
    json s{{"entity", to_json(n.entity)}, {"reversed", n.reversed}};
    s["relation"] = n.relation ? json(kb::to_string(*n.relation)) : json(nullptr);
    steps.push_back(std::move(s));
  }
  return steps;
}

PathResult path_from_json(const json& j) {
  if (!j.is_array()) bad_payload("path must be an array");
  PathResult out;
  for (const auto& s : j) {
    out.push_back({entity_from_json(field(s, "entity")), optional_relation(s),
                   field(s, "reversed").get<bool>()});
  }
  return out;
}

json to_json(const EntityDescription& d) {
  return {{"entity", to_json(d.entity)},
          {"as_subject", d.as_subject},
          {"as_object", d.as_object},
          {"tree_numbers", d.tree_numbers}};
}

EntityDescription description_from_json(const json& j) {
  EntityDescription d;
  d.entity = entity_from_json(field(j, "entity"));
  d.as_subject = field(j, "as_subject").get<std::size_t>();
  d.as_object = field(j, "as_object").get<std::size_t>();
  d.tree_numbers = field(j, "tree_numbers").get<std::vector<std::string>>();
  return d;
}

}  // namespace hypoforge::query
