#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "hypoforge/kb/types.hpp"

namespace hypoforge::kb {

using ClassPair = std::pair<EntityClass, EntityClass>;

// Ordered (subject, object) class pairs admitted for a relation.
const std::vector<ClassPair>& valid_pairs(RelationType relation);

// True iff the ordered (subject, object) umbrella pair is admitted for the
// relation. Species and cell lines never participate in a relation.
bool validate_pair(RelationType relation, EntityType subject_type,
                   EntityType object_type);

// Short human-readable meaning of a relation.
std::string_view relation_description(RelationType relation);

}  // namespace hypoforge::kb
