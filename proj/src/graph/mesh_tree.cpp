#include "hypoforge/graph/mesh_tree.hpp"

#include <fstream>
#include <istream>

#include <nlohmann/json.hpp>

#include "hypoforge/error.hpp"

namespace hypoforge::graph {

namespace {

bool well_formed(const std::string& number) {
  if (number.empty() || number.front() == '.' || number.back() == '.') return false;
  return number.find("..") == std::string::npos;
}

}  // namespace

std::string parent_tree_number(const std::string& number) {
  const auto dot = number.rfind('.');
  return dot == std::string::npos ? std::string{} : number.substr(0, dot);
}

bool MeshTree::add(const std::string& entity_id, const std::string& tree_number) {
  if (entity_id.empty() || !well_formed(tree_number)) return false;
  auto [it, inserted] = owner_.try_emplace(tree_number, entity_id);
  if (!inserted && it->second != entity_id) return false;
  numbers_[entity_id].insert(tree_number);
  return true;
}

MeshTree MeshTree::load(std::istream& in, std::vector<std::string>* warnings) {
  MeshTree tree;
  std::string line;
  std::size_t lineno = 0;
  auto warn = [&](std::string msg) {
    if (warnings) warnings->push_back("mesh line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("entity_id") ||
        !obj["entity_id"].is_string() || !obj.contains("tree_numbers") ||
        !obj["tree_numbers"].is_array()) {
      warn("malformed line");
      continue;
    }
    const auto id = obj["entity_id"].get<std::string>();
    for (const auto& n : obj["tree_numbers"]) {
      if (!n.is_string() || !tree.add(id, n.get<std::string>())) {
        warn("rejected tree number " + n.dump() + " for " + id);
      }
    }
  }
  return tree;
}

MeshTree MeshTree::load_file(const std::filesystem::path& path,
                             std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open MeSH file " + path.string());
  return load(in, warnings);
}

const std::set<std::string>& MeshTree::tree_numbers(const std::string& entity_id) const {
  auto it = numbers_.find(entity_id);
  if (it == numbers_.end()) {
    throw Error(ErrorCode::kNotFound, "entity '" + entity_id + "' has no MeSH tree numbers");
  }
  return it->second;
}

void MeshTree::collect_children(const std::string& number, std::set<std::string>& out) const {
  const std::string prefix = number + ".";
  for (auto it = owner_.lower_bound(prefix);
       it != owner_.end() && it->first.compare(0, prefix.size(), prefix) == 0; ++it) {
    if (it->first.find('.', prefix.size()) == std::string::npos) out.insert(it->second);
  }
}

std::vector<std::string> MeshTree::parents(const std::string& entity_id) const {
  std::set<std::string> out;
  for (const auto& n : tree_numbers(entity_id)) {
    auto parent = parent_tree_number(n);
    if (parent.empty()) continue;
    if (auto it = owner_.find(parent); it != owner_.end()) out.insert(it->second);
  }
  out.erase(entity_id);
  return {out.begin(), out.end()};
}

std::vector<std::string> MeshTree::children(const std::string& entity_id) const {
  std::set<std::string> out;
  for (const auto& n : tree_numbers(entity_id)) collect_children(n, out);
  out.erase(entity_id);
  return {out.begin(), out.end()};
}

std::vector<std::string> MeshTree::siblings(const std::string& entity_id) const {
  std::set<std::string> out;
  for (const auto& n : tree_numbers(entity_id)) {
    auto parent = parent_tree_number(n);
    if (!parent.empty()) collect_children(parent, out);
  }
  out.erase(entity_id);
  return {out.begin(), out.end()};
}

std::vector<std::string> MeshTree::descendants(const std::string& entity_id) const {
  std::set<std::string> seen;
  std::vector<std::string> frontier{entity_id};
  while (!frontier.empty()) {
    auto id = std::move(frontier.back());
    frontier.pop_back();
    for (auto& child : children(id)) {
      if (child != entity_id && seen.insert(child).second) frontier.push_back(child);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace hypoforge::graph
