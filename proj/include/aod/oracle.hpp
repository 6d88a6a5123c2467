#pragma once

#include <cstdint>

#include "aod/relation.hpp"
#include "aod/repair_types.hpp"

namespace aod {

// Exhaustive reference repair: enumerates kept subsets by descending size and,
// within a size, by lexicographic kept-id order, returning the first subset
// that satisfies the dependency (= a maximum-size repair with the
// lexicographically smallest kept-id set).  Aggregates are recomputed from
// scratch with local formulas so the oracle shares no packing code with the
// algorithms it validates.  Throws TooLarge above the cap.
RepairResult brute_force_repair(const Relation& rel, const Aod& aod,
                                std::int64_t cap = 20);

}  // namespace aod
