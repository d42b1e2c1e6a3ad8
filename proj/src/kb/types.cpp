#include "hypoforge/kb/types.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "hypoforge/error.hpp"

namespace hypoforge {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidFilter: return "invalid-filter";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kValidation: return "validation-error";
    case ErrorCode::kTemplate: return "template-error";
    case ErrorCode::kConfig: return "config-error";
    case ErrorCode::kIo: return "io-error";
    case ErrorCode::kBackend: return "backend-error";
    case ErrorCode::kContract: return "contract-error";
  }
  return "unknown";
}

std::optional<ErrorCode> parse_error_code(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::kContract); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    if (error_code_name(code) == name) return code;
  }
  return std::nullopt;
}

}  // namespace hypoforge

namespace hypoforge::kb {

namespace {

constexpr std::array<std::string_view, kEntityTypeCount> kEntityNames = {
    "chemical", "disease", "gene",    "mutation", "protein_mutation",
    "dna_mutation", "snp", "species", "cellline"};

constexpr std::array<std::string_view, kRelationTypeCount> kRelationNames = {
    "associate",          "cause",   "compare",  "cotreat",
    "drug_interact",      "inhibit", "interact", "negative_correlate",
    "positive_correlate", "prevent", "stimulate", "treat"};

std::string normalize_token(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == ' ' || c == '-') c = '_';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[static_cast<size_t>(m - 1)];
}

}  // namespace

std::optional<Date> Date::parse(std::string_view text) {
  Date d;
  if (text.size() != 4 && text.size() != 7 && text.size() != 10) return std::nullopt;
  if (!parse_int(text.substr(0, 4), d.year)) return std::nullopt;
  if (text.size() >= 7) {
    if (text[4] != '-' || !parse_int(text.substr(5, 2), d.month)) return std::nullopt;
    if (d.month < 1 || d.month > 12) return std::nullopt;
  }
  if (text.size() == 10) {
    if (text[7] != '-' || !parse_int(text.substr(8, 2), d.day)) return std::nullopt;
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return std::nullopt;
  }
  return d;
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

const std::vector<EntityType>& all_entity_types() {
  static const std::vector<EntityType> kAll = {
      EntityType::kChemical,        EntityType::kDisease,
      EntityType::kGene,            EntityType::kMutation,
      EntityType::kProteinMutation, EntityType::kDnaMutation,
      EntityType::kSnp,             EntityType::kSpecies,
      EntityType::kCellLine};
  return kAll;
}

const std::vector<RelationType>& all_relation_types() {
  static const std::vector<RelationType> kAll = [] {
    std::vector<RelationType> v;
    for (int i = 0; i < kRelationTypeCount; ++i) v.push_back(static_cast<RelationType>(i));
    return v;
  }();
  return kAll;
}

std::string_view to_string(EntityType t) { return kEntityNames[static_cast<size_t>(t)]; }

std::string_view to_string(RelationType r) {
  return kRelationNames[static_cast<size_t>(r)];
}

std::string_view to_string(EntityClass c) {
  switch (c) {
    case EntityClass::kChemical: return "Chemical";
    case EntityClass::kDisease: return "Disease";
    case EntityClass::kGene: return "Gene";
    case EntityClass::kVariant: return "Variant";
  }
  return "";
}

std::optional<EntityType> parse_entity_type(std::string_view text) {
  const std::string norm = normalize_token(text);
  for (size_t i = 0; i < kEntityNames.size(); ++i) {
    if (norm == kEntityNames[i]) return static_cast<EntityType>(i);
  }
  if (norm == "cell_line") return EntityType::kCellLine;
  return std::nullopt;
}

std::optional<RelationType> parse_relation(std::string_view text) {
  const std::string norm = normalize_token(text);
  for (size_t i = 0; i < kRelationNames.size(); ++i) {
    if (norm == kRelationNames[i]) return static_cast<RelationType>(i);
  }
  return std::nullopt;
}

bool is_mutation_class(EntityType t) {
  return t == EntityType::kMutation || t == EntityType::kProteinMutation ||
         t == EntityType::kDnaMutation || t == EntityType::kSnp;
}

std::optional<EntityClass> umbrella(EntityType t) {
  switch (t) {
    case EntityType::kChemical: return EntityClass::kChemical;
    case EntityType::kDisease: return EntityClass::kDisease;
    case EntityType::kGene: return EntityClass::kGene;
    case EntityType::kMutation:
    case EntityType::kProteinMutation:
    case EntityType::kDnaMutation:
    case EntityType::kSnp: return EntityClass::kVariant;
    case EntityType::kSpecies:
    case EntityType::kCellLine: return std::nullopt;
  }
  return std::nullopt;
}

std::strong_ordering TripletKey::operator<=>(const TripletKey& o) const {
  if (auto c = subject_id <=> o.subject_id; c != 0) return c;
  if (auto c = to_string(relation) <=> to_string(o.relation); c != 0) return c;
  return object_id <=> o.object_id;
}

TripletKey key_of(const Triplet& t) { return {t.subject.id, t.relation, t.object.id}; }

}  // namespace hypoforge::kb
