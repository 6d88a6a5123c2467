#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "aod/relation.hpp"
#include "aod/repair_types.hpp"
#include "aod/value.hpp"

namespace aod {

// Partial-solution dictionary of the exact repair.  One shared ordered map
// carries the best chain ending at each aggregate key; superseded and pruned
// nodes stay in the append-only arena so back-pointers never dangle.
struct SolutionDict {
  struct Node {
    std::int32_t group = 0;   // trend-order group index the entry came from
    AggValue key;             // aggregate of that group's packed subset
    std::int64_t size = 0;    // total kept tuples along the chain
    std::int32_t parent = -1; // arena index of the previous chain node
  };
  std::vector<Node> arena;
  std::map<AggValue, std::int32_t> entries;  // key -> newest/best arena node
};

// Drops entries a smaller-or-equal key with at least the same size makes
// redundant; surviving sizes are strictly increasing in key order.
void prune_dominated(SolutionDict& dict);

// Drops entries whose chains already imply more than h removals within the
// processed prefix of n_prefix tuples.
void prune_by_bound(SolutionDict& dict, std::int64_t h, std::int64_t n_prefix);

// Walks the chain ending at final_key and re-derives each chain group's
// packed subset; returns the kept tuple ids (ascending).  The relation must
// be the trend-normalized one the dictionary was built from.  Throws
// CorruptBacktrace if sizes do not telescope or chain order is broken.
std::vector<std::int64_t> reconstruct(const SolutionDict& dict,
                                      const AggValue& final_key,
                                      const Relation& trend_rel,
                                      const Aod& aod,
                                      const RepairOptions& options);

// Exact cardinality repair: maximum-size subset satisfying the dependency.
RepairResult card_repair(const Relation& rel, const Aod& aod,
                         const RepairOptions& options = {});

}  // namespace aod
