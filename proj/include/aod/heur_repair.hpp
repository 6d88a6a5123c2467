#pragma once

#include <cstdint>
#include <vector>

#include "aod/relation.hpp"
#include "aod/repair_types.hpp"
#include "aod/value.hpp"

namespace aod {

// One greedy removal candidate: a batch of tuples from a single group whose
// joint removal has the stated exact impact on the violation sum.
struct Candidate {
  std::int64_t group_key = 0;
  std::int64_t group_index = 0;  // position in the trend-ordered group walk
  std::int64_t value = 0;        // characteristic value used for tie-breaking
  std::vector<std::int64_t> ids; // batch members (singleton in naive mode)
  AggValue impact;               // violation-sum decrease (may be negative)
};

// Candidates of the first greedy round on the given relation.  Unoptimized:
// one singleton per live tuple.  Optimized: batches restricted to groups of
// violating pairs (left side only for the monotone aggregates max, count,
// countd, sum).  Exposed separately so impact formulas can be validated
// against leave-one-out recomputation.
std::vector<Candidate> candidate_set(const Relation& rel, const Aod& aod,
                                     bool optimized);

// Greedy repair: repeatedly remove the candidate with the highest impact per
// removed tuple until the dependency holds.  Ties: lowest group index, then
// highest value, then lowest id.  Always terminates; the result's removal
// events record every step in order.
RepairResult heur_repair(const Relation& rel, const Aod& aod,
                         bool optimized = true);

}  // namespace aod
