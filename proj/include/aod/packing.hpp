#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "aod/relation.hpp"
#include "aod/value.hpp"

namespace aod {

enum class PackerKind { Naive, Optimized };

// Packing answers, for one group and one aggregate: for every attainable
// aggregate value x, how large can a sub-bag of the group be so that its
// aggregate is exactly x — and which tuples realize that size.
//
// Entries always describe non-empty sub-bags (size >= 1); the empty sub-bag is
// represented upstream by the group vanishing, not by a table entry.
class PackTable {
 public:
  using Reconstructor =
      std::function<std::vector<std::int64_t>(const AggValue&)>;

  PackTable() = default;
  PackTable(std::int64_t group_size, std::map<AggValue, std::int64_t> sizes,
            Reconstructor recon)
      : group_size_(group_size),
        sizes_(std::move(sizes)),
        recon_(std::move(recon)) {}

  std::int64_t group_size() const { return group_size_; }
  const std::map<AggValue, std::int64_t>& entries() const { return sizes_; }
  bool contains(const AggValue& key) const { return sizes_.count(key) > 0; }
  // Size of the largest sub-bag attaining key; InfeasibleValue when absent.
  std::int64_t size_at(const AggValue& key) const;
  // Kept tuple ids (ascending) of a largest sub-bag attaining key.
  std::vector<std::int64_t> reconstruct(const AggValue& key) const;
  // Drops every entry smaller than min_size (the removal-bound filter).
  void filter_min_size(std::int64_t min_size);

 private:
  std::int64_t group_size_ = 0;
  std::map<AggValue, std::int64_t> sizes_;
  Reconstructor recon_;
};

// ---------------------------------------------------------------------------
// Single-value packers.  Each returns the kept tuple ids (ascending) of a
// largest sub-bag whose aggregate equals x, or throws InfeasibleValue when no
// sub-bag attains x.  These are the reference building blocks; the whole-table
// packers must agree with them entry by entry.

std::vector<std::int64_t> pack_max(const Group& g, const AggValue& x);
std::vector<std::int64_t> pack_min(const Group& g, const AggValue& x);
std::vector<std::int64_t> pack_count(const Group& g, const AggValue& x);
std::vector<std::int64_t> pack_countd(const Group& g, const AggValue& x);
std::vector<std::int64_t> pack_median_naive(const Group& g, const AggValue& x);

// ---------------------------------------------------------------------------
// Whole-table packers for the hard aggregates.

// Dense subset-sum sweep over the ascending value histogram; requires every
// value in the group to be strictly positive.  check_invariants additionally
// verifies the copy-chain structure of the choice rows after every value.
PackTable wholepack_sum(const Group& g, bool check_invariants = false);

// Removal-state sweep for averages.  h, when set, bounds the number of
// removed tuples per group and prunes the state space accordingly.
PackTable wholepack_avg(const Group& g, std::optional<std::int64_t> h);

// Pivot enumeration for medians: single positions, adjacent positions, and
// distinct-value pairs, windowed/pruned when h is set.
PackTable wholepack_median(const Group& g, std::optional<std::int64_t> h);

// ---------------------------------------------------------------------------
// Naive reference tables for sum/avg (per-tuple dynamic programs over the
// full value range; handle arbitrary, including non-positive, values).

PackTable naive_sum_dp(const Group& g);
PackTable naive_avg_dp(const Group& g);

// Bounded-removal tables for sum/avg computed directly in removal space:
// the output must equal the unbounded table filtered to entries of size
// >= |g| - h.  Other aggregates are rejected with UnsupportedCombination.
PackTable bounded_removal_tables(const Group& g, Aggregate alpha,
                                 std::int64_t h);

// Reference dispatcher: the full table for any aggregate built from the
// per-value definitions only (closed-form scans, per-tuple DPs, and
// pack_median_naive over every candidate key), with no holistic shortcuts.
PackTable wholepack_naive(const Group& g, Aggregate alpha);

// ---------------------------------------------------------------------------
// Dispatch used by the exact repair: builds the table for alpha with the
// requested packer and applies the removal bound h as a final entry filter
// (size >= |g| - h).  The optimized sum packer needs strictly positive
// values; groups violating that fall back to the naive sum table unless
// allow_fallback is false (then UnsupportedCombination is raised).
PackTable build_pack_table(const Group& g, Aggregate alpha, PackerKind kind,
                           std::optional<std::int64_t> h,
                           bool check_invariants = false,
                           bool allow_fallback = true);

// Diagnostic view of the optimized sum packer, exposed for tests: the
// ascending (value, multiplicity) histogram, the final size row indexed by
// remaining sum (-1 = infeasible), and the number of copy-chain violations
// observed (always 0 when check_invariants ran clean).
struct SumDpTrace {
  std::vector<std::pair<std::int64_t, std::int64_t>> hist;
  std::vector<std::int32_t> final_m;
  std::int64_t invariant_violations = 0;
};
SumDpTrace wholepack_sum_trace(const Group& g, bool check_invariants = false);

}  // namespace aod
