#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aod/packing.hpp"
#include "aod/relation.hpp"
#include "aod/value.hpp"

namespace aod {

// How the exact repair obtains its removal bound h.
enum class HBoundMode { None, Heuristic, Explicit };

// Which dictionary prunings run after each group pass.
enum class DictPruning { None, Dominated, Bound, Both };

struct RepairOptions {
  PackerKind packer = PackerKind::Optimized;
  HBoundMode h_mode = HBoundMode::None;
  std::int64_t h_explicit = 0;      // used when h_mode == Explicit
  DictPruning pruning = DictPruning::None;
  bool allow_naive_fallback = true; // optimized sum on non-positive values
  bool check_invariants = false;    // packer structural checks (sum Lemma)
  int threads = 1;                  // parallel per-group table builds
};

// One greedy removal step: the batch removed, its group and characteristic
// value, and the exact impact it had on the violation sum.
struct RemovalEvent {
  std::int64_t group_key = 0;
  std::int64_t value = 0;
  std::vector<std::int64_t> ids;
  AggValue impact;
};

// Common result shape for exact, heuristic, and oracle repairs.
struct RepairResult {
  std::vector<std::int64_t> removed_ids;  // ascending
  std::vector<std::int64_t> kept_ids;     // ascending
  std::int64_t kept_size = 0;
  ViolationProfile before;
  ViolationProfile after;
  std::string algorithm;                  // "exact" | "heuristic" | "oracle"
  std::optional<std::int64_t> heuristic_bound_used;
  double runtime_ms = 0.0;

  // Exact-engine statistics.
  std::int64_t dict_final_entries = 0;
  std::int64_t dict_peak_entries = 0;
  std::int64_t arena_nodes = 0;

  // Heuristic trace.
  std::vector<RemovalEvent> events;
  std::int64_t rounds = 0;
};

}  // namespace aod
