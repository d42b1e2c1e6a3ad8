#include "hypoforge/agent/tools.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "hypoforge/error.hpp"
#include "hypoforge/kb/validity.hpp"
#include "hypoforge/query/render.hpp"

namespace hypoforge::agent {

using nlohmann::json;
using query::EntityRef;

namespace {

constexpr std::size_t kDefaultMaxPaths = 5;

const std::vector<ToolParam> kFilterParams = {
    {"head_entities", ParamKind::kEntityList},
    {"tail_entities", ParamKind::kEntityList},
    {"relations", ParamKind::kRelationList},
    {"pmids", ParamKind::kPmidList},
    {"text_description", ParamKind::kText},
    {"limit", ParamKind::kCount},
};

struct ArgError {
  std::string param;
  std::string why;
};

// Last dotted segment: "Entity_Type.CHEMICAL" -> "CHEMICAL".
std::string last_segment(const std::string& dotted) {
  const auto dot = dotted.rfind('.');
  return dot == std::string::npos ? dotted : dotted.substr(dot + 1);
}

bool is_call(const json& v, std::string_view callee) {
  return v.is_object() && v.contains("$call") && last_segment(v["$call"].get<std::string>()) == callee;
}

// Collects a constructor's arguments by parameter name.
std::map<std::string, json> call_args(const json& v, const std::vector<std::string>& names,
                                      const std::string& param) {
  std::map<std::string, json> out;
  const auto& args = v["args"];
  if (args.size() > names.size()) throw ArgError{param, "too many constructor arguments"};
  for (std::size_t i = 0; i < args.size(); ++i) out[names[i]] = args[i];
  for (const auto& [k, val] : v["kwargs"].items()) {
    if (std::find(names.begin(), names.end(), k) == names.end()) {
      throw ArgError{param, "unexpected constructor argument '" + k + "'"};
    }
    if (out.contains(k)) throw ArgError{param, "duplicate constructor argument '" + k + "'"};
    out[k] = val;
  }
  return out;
}

std::string describe(const json& v) {
  if (v.is_object() && v.contains("$name")) return v["$name"].get<std::string>();
  if (v.is_object() && v.contains("$call")) return v["$call"].get<std::string>() + "(...)";
  return v.dump();
}

kb::EntityType to_entity_type(const json& v, const std::string& param) {
  std::optional<kb::EntityType> t;
  if (v.is_string()) t = kb::parse_entity_type(last_segment(v.get<std::string>()));
  if (v.is_object() && v.contains("$name")) {
    t = kb::parse_entity_type(last_segment(v["$name"].get<std::string>()));
  }
  if (!t) throw ArgError{param, "unknown entity type " + describe(v)};
  return *t;
}

EntityRef to_entity(const json& v, const std::string& param) {
  if (v.is_string()) return EntityRef{std::nullopt, v.get<std::string>(), std::nullopt};
  if (!is_call(v, "Entity")) {
    throw ArgError{param, "expected Entity(name=..., entity_type=...) but got " + describe(v)};
  }
  auto args = call_args(v, {"name", "entity_type", "id"}, param);
  EntityRef ref;
  if (auto it = args.find("name"); it != args.end() && !it->second.is_null()) {
    if (!it->second.is_string()) throw ArgError{param, "Entity name must be a string"};
    ref.name = it->second.get<std::string>();
  }
  if (auto it = args.find("entity_type"); it != args.end() && !it->second.is_null()) {
    ref.type = to_entity_type(it->second, param);
  }
  if (auto it = args.find("id"); it != args.end() && !it->second.is_null()) {
    if (it->second.is_string()) ref.id = it->second.get<std::string>();
    else if (it->second.is_number_integer()) ref.id = std::to_string(it->second.get<long long>());
    else throw ArgError{param, "Entity id must be a string"};
  }
  if (ref.name.empty() && !ref.id) throw ArgError{param, "Entity needs a name or an id"};
  return ref;
}

kb::RelationType to_relation(const json& v, const std::string& param) {
  std::optional<kb::RelationType> r;
  if (v.is_string()) r = kb::parse_relation(last_segment(v.get<std::string>()));
  if (v.is_object() && v.contains("$name")) {
    r = kb::parse_relation(last_segment(v["$name"].get<std::string>()));
  }
  if (is_call(v, "Relation")) {
    auto args = call_args(v, {"name"}, param);
    if (args.contains("name")) return to_relation(args["name"], param);
  }
  if (!r) throw ArgError{param, "unknown relation " + describe(v)};
  return *r;
}

kb::Pmid to_pmid(const json& v, const std::string& param) {
  if (is_call(v, "PMID")) {
    auto args = call_args(v, {"pmid"}, param);
    if (args.contains("pmid")) return to_pmid(args["pmid"], param);
  }
  long long n = 0;
  if (v.is_number_integer()) {
    n = v.get<long long>();
  } else if (v.is_string()) {
    const auto s = v.get<std::string>();
    std::size_t used = 0;
    try {
      n = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ArgError{param, "invalid PMID " + v.dump()};
  } else {
    throw ArgError{param, "invalid PMID " + describe(v)};
  }
  if (n <= 0) throw ArgError{param, "PMID must be positive"};
  return kb::Pmid{n};
}

template <typename T, typename Fn>
std::vector<T> to_list(const json& v, const std::string& param, Fn&& one) {
  std::vector<T> out;
  if (v.is_array()) {
    for (const auto& item : v) out.push_back(one(item, param));
  } else {
    out.push_back(one(v, param));
  }
  return out;
}

std::string to_text(const json& v, const std::string& param) {
  if (!v.is_string()) throw ArgError{param, "expected a string"};
  return v.get<std::string>();
}

std::size_t to_count(const json& v, const std::string& param) {
  long long n = 0;
  if (v.is_number_integer()) {
    n = v.get<long long>();
  } else if (v.is_number_float() && v.get<double>() == static_cast<long long>(v.get<double>())) {
    n = static_cast<long long>(v.get<double>());
  } else {
    throw ArgError{param, "expected an integer"};
  }
  if (n < 1) throw ArgError{param, "must be at least 1"};
  return static_cast<std::size_t>(n);
}

class Bound {
 public:
  Bound(const ToolSpec& spec, const ApiCall& call) {
    const auto& pos = call.positional;
    if (pos.size() > spec.params.size()) {
      throw ArgError{"", "too many positional arguments for " + spec.name};
    }
    for (std::size_t i = 0; i < pos.size(); ++i) values_[spec.params[i].name] = pos[i];
    for (const auto& [k, v] : call.keywords.items()) {
      const bool known = std::any_of(spec.params.begin(), spec.params.end(),
                                     [&](const ToolParam& p) { return p.name == k; });
      if (!known) throw ArgError{k, "unexpected argument for " + spec.name};
      if (values_.contains(k)) throw ArgError{k, "given more than once"};
      values_[k] = v;
    }
    for (auto it = values_.begin(); it != values_.end();) {
      it = it->second.is_null() ? values_.erase(it) : std::next(it);
    }
    for (const auto& p : spec.params) {
      if (p.required && !values_.contains(p.name)) throw ArgError{p.name, "missing required argument"};
    }
  }

  const json* get(const std::string& name) const {
    auto it = values_.find(name);
    return it == values_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, json> values_;
};

query::QueryFilter filter_of(const Bound& b) {
  query::QueryFilter f;
  if (auto v = b.get("head_entities")) f.head_entities = to_list<EntityRef>(*v, "head_entities", to_entity);
  if (auto v = b.get("tail_entities")) f.tail_entities = to_list<EntityRef>(*v, "tail_entities", to_entity);
  if (auto v = b.get("relations")) f.relations = to_list<kb::RelationType>(*v, "relations", to_relation);
  if (auto v = b.get("pmids")) f.pmids = to_list<kb::Pmid>(*v, "pmids", to_pmid);
  if (auto v = b.get("text_description")) f.text_description = to_text(*v, "text_description");
  if (auto v = b.get("limit")) f.limit = to_count(*v, "limit");
  return f;
}

std::string relation_info(kb::RelationType r) {
  std::ostringstream out;
  out << kb::to_string(r) << ": " << kb::relation_description(r) << "\nValid (subject, object) type pairs:";
  for (const auto& [s, o] : kb::valid_pairs(r)) {
    out << " (" << kb::to_string(s) << ", " << kb::to_string(o) << ")";
  }
  return out.str();
}

std::string run(const query::KnowledgeAccess& access, const ToolSpec& spec, const Bound& b) {
  const auto& n = spec.name;
  if (n == "get_entities") return query::render(access.get_entities(filter_of(b)));
  if (n == "get_relations") return query::render(access.get_relations(filter_of(b)));
  if (n == "get_triplets") return query::render(access.get_triplets(filter_of(b)));
  if (n == "get_articles") return query::render(access.get_articles(filter_of(b)));
  if (n == "browse_articles") {
    return query::render(access.browse_articles(to_list<kb::Pmid>(*b.get("pmids"), "pmids", to_pmid)));
  }
  if (n == "get_shortest_entity_paths") {
    const auto src = to_entity(*b.get("source_entity"), "source_entity");
    const auto dst = to_entity(*b.get("target_entity"), "target_entity");
    std::size_t max_paths = kDefaultMaxPaths;
    if (auto v = b.get("max_paths")) max_paths = to_count(*v, "max_paths");
    const auto s = access.resolve_entity(src);
    const auto d = access.resolve_entity(dst);
    return query::render(access.shortest_paths(s.id, d.id, max_paths));
  }
  if (n == "get_mesh_parents" || n == "get_mesh_children" || n == "get_mesh_siblings") {
    const auto e = access.resolve_entity(to_entity(*b.get("entity"), "entity"));
    const auto dir = n == "get_mesh_parents"    ? query::MeshDirection::kParents
                     : n == "get_mesh_children" ? query::MeshDirection::kChildren
                                                : query::MeshDirection::kSiblings;
    return query::render(access.mesh_neighbors(e.id, dir));
  }
  if (n == "get_relation_description") {
    return relation_info(to_relation(*b.get("relation"), "relation"));
  }
  if (n == "get_entity_description") {
    const auto e = access.resolve_entity(to_entity(*b.get("entity"), "entity"));
    return query::render(access.describe_entity(e.id));
  }
  throw Error(ErrorCode::kContract, "tool '" + n + "' has no handler");
}

std::string type_name(ParamKind k) {
  switch (k) {
    case ParamKind::kEntityList: return "list[Entity]";
    case ParamKind::kEntity: return "Entity";
    case ParamKind::kRelationList: return "list[Relation]";
    case ParamKind::kRelation: return "Relation";
    case ParamKind::kPmidList: return "list[PMID]";
    case ParamKind::kText: return "str";
    case ParamKind::kCount: return "int";
  }
  return "";
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

const std::vector<ToolSpec>& tool_catalog() {
  static const std::vector<ToolSpec> catalog = [] {
    auto filter = [](std::string name, std::string returns, std::string doc) {
      return ToolSpec{std::move(name), kFilterParams, std::move(returns), std::move(doc)};
    };
    std::vector<ToolSpec> c;
    c.push_back(filter("get_entities", "list[Entity]",
                       "Entities whose names match text_description, optionally restricted to the\n"
                       "types of the given head/tail entities. Without text, resolves the given entities."));
    c.push_back(filter("get_relations", "list[tuple[Relation, int]]",
                       "Relations between the head (subject) and tail (object) entities, with the\n"
                       "number of distinct triplets for each, most frequent first."));
    c.push_back(filter("get_triplets", "list[Triplet]",
                       "Historical triplets satisfying every given filter. With text_description,\n"
                       "ranked by how well their supporting articles match the text."));
    c.push_back(filter("get_articles", "list[PMID]",
                       "PMIDs of articles supporting triplets that satisfy the filters, ranked by\n"
                       "text relevance when text_description is given."));
    c.push_back({"browse_articles", {{"pmids", ParamKind::kPmidList, true}}, "list[Article]",
                 "Title, abstract, date and journal of each requested PMID."});
    c.push_back({"get_shortest_entity_paths",
                 {{"source_entity", ParamKind::kEntity, true},
                  {"target_entity", ParamKind::kEntity, true},
                  {"max_paths", ParamKind::kCount}},
                 "list[list[Entity | Relation]]",
                 "Shortest connecting paths between two entities in the knowledge graph, ignoring\n"
                 "edge direction. max_paths defaults to " + std::to_string(kDefaultMaxPaths) + "."});
    c.push_back({"get_mesh_parents", {{"entity", ParamKind::kEntity, true}}, "list[Entity]",
                 "Broader MeSH concepts directly above a disease or chemical."});
    c.push_back({"get_mesh_children", {{"entity", ParamKind::kEntity, true}}, "list[Entity]",
                 "Narrower MeSH concepts directly below a disease or chemical."});
    c.push_back({"get_mesh_siblings", {{"entity", ParamKind::kEntity, true}}, "list[Entity]",
                 "MeSH concepts sharing a direct parent with a disease or chemical."});
    c.push_back({"get_relation_description", {{"relation", ParamKind::kRelation, true}}, "str",
                 "Meaning of a relation and the entity type pairs it admits."});
    c.push_back({"get_entity_description", {{"entity", ParamKind::kEntity, true}}, "str",
                 "Identifier, type, triplet counts and MeSH tree numbers of an entity."});
    return c;
  }();
  return catalog;
}

ToolRegistry::ToolRegistry(std::shared_ptr<const query::KnowledgeAccess> access,
                           std::vector<std::string> enabled)
    : access_(std::move(access)) {
  if (!access_) throw Error(ErrorCode::kInvalidArgument, "tool registry needs a knowledge access");
  const auto& catalog = tool_catalog();
  for (const auto& name : enabled) {
    if (std::none_of(catalog.begin(), catalog.end(), [&](const ToolSpec& s) { return s.name == name; })) {
      throw Error(ErrorCode::kConfig, "unknown tool '" + name + "'");
    }
  }
  for (const auto& spec : catalog) {
    if (enabled.empty() || std::find(enabled.begin(), enabled.end(), spec.name) != enabled.end()) {
      tools_.push_back(&spec);
    }
  }
}

std::string ToolRegistry::execute(const ApiCall& call) const {
  const auto it = std::find_if(tools_.begin(), tools_.end(),
                               [&](const ToolSpec* s) { return s->name == call.function; });
  if (it == tools_.end()) return "error: unknown function '" + call.function + "'";
  try {
    const Bound bound(**it, call);
    return run(*access_, **it, bound);
  } catch (const ArgError& e) {
    if (e.param.empty()) return "error: " + e.why;
    return "error: invalid argument '" + e.param + "': " + e.why;
  } catch (const Error& e) {
    return "error: " + std::string(error_code_name(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    return std::string("error: ") + e.what();
  }
}

std::string ToolRegistry::api_description() const {
  std::ostringstream out;
  out << "class Entity_Type(Enum):\n    ";
  const auto& types = kb::all_entity_types();
  for (std::size_t i = 0; i < types.size(); ++i) {
    out << (i ? ", " : "") << upper(kb::to_string(types[i]));
  }
  out << "\n\nclass Relation(Enum):\n    ";
  const auto& rels = kb::all_relation_types();
  for (std::size_t i = 0; i < rels.size(); ++i) {
    out << (i ? ", " : "") << upper(kb::to_string(rels[i]));
  }
  out << "\n\n@dataclass\nclass Entity:\n    name: str\n    entity_type: Entity_Type\n"
         "    id: str = None  # vocabulary identifier, optional when the name is unambiguous\n\n"
         "PMID = int\n\n"
         "@dataclass\nclass Triplet:\n    subject_entity: Entity\n    relation: Relation\n"
         "    object_entity: Entity\n    pmids: list[PMID]\n\n"
         "@dataclass\nclass Article:\n    pmid: PMID\n    title: str\n    abstract: str\n";
  for (const auto* spec : tools_) {
    out << "\ndef " << spec->name << "(";
    for (std::size_t i = 0; i < spec->params.size(); ++i) {
      const auto& p = spec->params[i];
      out << (i ? ", " : "") << p.name << ": " << type_name(p.kind);
      if (!p.required) {
        if (p.kind == ParamKind::kCount && p.name == "limit") out << " = " << query::kDefaultLimit;
        else if (p.kind == ParamKind::kCount) out << " = " << kDefaultMaxPaths;
        else out << " = None";
      }
    }
    out << ") -> " << spec->returns << ":\n    \"\"\"";
    std::string doc = spec->doc;
    for (std::size_t pos = doc.find('\n'); pos != std::string::npos; pos = doc.find('\n', pos + 5)) {
      doc.replace(pos, 1, "\n    ");
    }
    out << doc << "\"\"\"\n";
  }
  auto text = out.str();
  text.pop_back();
  return text;
}

}  // namespace hypoforge::agent
