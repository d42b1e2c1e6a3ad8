#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hypoforge::kb {

// Calendar date at day precision.
struct Date {
  int year = 0;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  // Accepts "YYYY", "YYYY-MM" or "YYYY-MM-DD"; coarser inputs normalize to
  // the first day of the period. Returns nullopt for anything else.
  static std::optional<Date> parse(std::string_view text);
  std::string to_string() const;
};

enum class Pmid : std::int64_t {};

inline std::int64_t to_int(Pmid p) { return static_cast<std::int64_t>(p); }

enum class EntityType {
  kChemical,
  kDisease,
  kGene,
  kMutation,
  kProteinMutation,
  kDnaMutation,
  kSnp,
  kSpecies,
  kCellLine,
};

inline constexpr int kEntityTypeCount = 9;

// Umbrella classes used by the relation validity matrix.
enum class EntityClass { kChemical, kDisease, kGene, kVariant };

enum class RelationType {
  kAssociate,
  kCause,
  kCompare,
  kCotreat,
  kDrugInteract,
  kInhibit,
  kInteract,
  kNegativeCorrelate,
  kPositiveCorrelate,
  kPrevent,
  kStimulate,
  kTreat,
};

inline constexpr int kRelationTypeCount = 12;

const std::vector<EntityType>& all_entity_types();
const std::vector<RelationType>& all_relation_types();

std::string_view to_string(EntityType t);
std::string_view to_string(RelationType r);
std::string_view to_string(EntityClass c);

// Lenient parsers: case-insensitive, spaces and underscores interchangeable
// ("protein mutation" == "protein_mutation", "Drug interact" == "drug_interact").
std::optional<EntityType> parse_entity_type(std::string_view text);
std::optional<RelationType> parse_relation(std::string_view text);

bool is_mutation_class(EntityType t);
std::optional<EntityClass> umbrella(EntityType t);

struct Entity {
  std::string id;
  std::string name;
  EntityType type = EntityType::kChemical;

  bool operator==(const Entity&) const = default;
};

struct Triplet {
  Entity subject;
  RelationType relation = RelationType::kAssociate;
  Entity object;
};

// Directed identity of a hypothesis: the reverse orientation is distinct.
struct TripletKey {
  std::string subject_id;
  RelationType relation = RelationType::kAssociate;
  std::string object_id;

  std::strong_ordering operator<=>(const TripletKey& o) const;
  bool operator==(const TripletKey&) const = default;
};

TripletKey key_of(const Triplet& t);

struct Article {
  Pmid pmid{};
  std::string title;
  std::string abstract_text;
  Date pub_date;
  std::string journal;
};

struct HypothesisRecord {
  Triplet triplet;
  std::set<Pmid> pmids;
  Date discovery_date;

  TripletKey key() const { return key_of(triplet); }
};

}  // namespace hypoforge::kb
