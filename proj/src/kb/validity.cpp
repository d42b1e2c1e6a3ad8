#include "hypoforge/kb/validity.hpp"

#include <algorithm>
#include <array>

namespace hypoforge::kb {

namespace {

using C = EntityClass;

struct RelationInfo {
  std::string_view description;
  std::vector<ClassPair> pairs;
};

const std::array<RelationInfo, kRelationTypeCount>& relation_table() {
  // Indexed by RelationType.
  static const std::array<RelationInfo, kRelationTypeCount> kTable = {{
      {"Related in a way not captured by a more specific relation",
       {{C::kChemical, C::kDisease}, {C::kChemical, C::kGene}, {C::kChemical, C::kVariant},
        {C::kDisease, C::kGene}, {C::kDisease, C::kVariant}, {C::kVariant, C::kVariant}}},
      {"The subject brings about or aggravates the disease",
       {{C::kChemical, C::kDisease}, {C::kVariant, C::kDisease}}},
      {"The two chemicals are evaluated against each other", {{C::kChemical, C::kChemical}}},
      {"The two chemicals are given together as a combined therapy", {{C::kChemical, C::kChemical}}},
      {"One chemical changes the pharmacological effect of the other", {{C::kChemical, C::kChemical}}},
      {"The subject lowers the level or activity of the object",
       {{C::kChemical, C::kVariant}, {C::kGene, C::kDisease}}},
      {"The two entities bind or otherwise physically associate",
       {{C::kChemical, C::kGene}, {C::kChemical, C::kVariant}, {C::kGene, C::kGene}}},
      {"A rise in one entity goes with a fall in the other",
       {{C::kChemical, C::kGene}, {C::kChemical, C::kVariant}, {C::kGene, C::kGene}}},
      {"The two entities rise and fall together",
       {{C::kChemical, C::kChemical}, {C::kChemical, C::kGene}, {C::kGene, C::kGene}}},
      {"The variant lowers the risk of the disease", {{C::kVariant, C::kDisease}}},
      {"The subject raises the level or activity of the object",
       {{C::kChemical, C::kVariant}, {C::kGene, C::kDisease}}},
      {"The chemical is used as a therapy for the disease", {{C::kChemical, C::kDisease}}},
  }};
  return kTable;
}

}  // namespace

const std::vector<ClassPair>& valid_pairs(RelationType relation) {
  return relation_table()[static_cast<size_t>(relation)].pairs;
}

bool validate_pair(RelationType relation, EntityType subject_type, EntityType object_type) {
  const auto s = umbrella(subject_type);
  const auto o = umbrella(object_type);
  if (!s || !o) return false;
  const auto& pairs = valid_pairs(relation);
  return std::find(pairs.begin(), pairs.end(), ClassPair{*s, *o}) != pairs.end();
}

std::string_view relation_description(RelationType relation) {
  return relation_table()[static_cast<size_t>(relation)].description;
}

}  // namespace hypoforge::kb
