#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace hypoforge::graph {

// MeSH hierarchy keyed by dot-separated tree numbers ("C19.246"). The parent
// of a tree number is the number without its last segment. Each tree number
// belongs to at most one entity.
class MeshTree {
 public:
  // Returns false (and leaves the tree unchanged) when the tree number is
  // already owned by a different entity or is malformed.
  bool add(const std::string& entity_id, const std::string& tree_number);

  // JSONL lines {"entity_id", "tree_numbers": [...]}. Rejected lines and
  // conflicting tree numbers are appended to `warnings` when provided.
  static MeshTree load(std::istream& in, std::vector<std::string>* warnings = nullptr);
  static MeshTree load_file(const std::filesystem::path& path,
                            std::vector<std::string>* warnings = nullptr);

  bool contains(const std::string& entity_id) const { return numbers_.contains(entity_id); }
  const std::set<std::string>& tree_numbers(const std::string& entity_id) const;
  std::size_t entity_count() const { return numbers_.size(); }
  const std::map<std::string, std::set<std::string>>& entries() const { return numbers_; }

  // Each returns ids deduplicated and sorted; the queried entity itself is
  // never included. Throws Error(kNotFound) for entities absent from the tree.
  std::vector<std::string> parents(const std::string& entity_id) const;
  std::vector<std::string> children(const std::string& entity_id) const;
  std::vector<std::string> siblings(const std::string& entity_id) const;
  // Transitive closure of children.
  std::vector<std::string> descendants(const std::string& entity_id) const;

 private:
  // Owners of tree numbers exactly one segment below `number`.
  void collect_children(const std::string& number, std::set<std::string>& out) const;

  std::map<std::string, std::set<std::string>> numbers_;
  std::map<std::string, std::string> owner_;
};

// "C19.246" -> "C19"; root numbers yield an empty string.
std::string parent_tree_number(const std::string& number);

}  // namespace hypoforge::graph
