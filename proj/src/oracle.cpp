#include "aod/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>
#include <vector>

#include "aod/error.hpp"

namespace aod {

namespace {

using i64 = std::int64_t;

// Independent aggregate evaluation on a non-empty, ascending value list.
AggValue local_aggregate(const std::vector<i64>& sorted_values,
                         Aggregate alpha) {
  i64 n = static_cast<i64>(sorted_values.size());
  switch (alpha) {
    case Aggregate::Max: return AggValue::integer(sorted_values.back());
    case Aggregate::Min: return AggValue::integer(sorted_values.front());
    case Aggregate::Count: return AggValue::count(n);
    case Aggregate::CountDistinct: {
      i64 d = 0;
      for (i64 i = 0; i < n; ++i) {
        if (i == 0 || sorted_values[i] != sorted_values[i - 1]) ++d;
      }
      return AggValue::count(d);
    }
    case Aggregate::Sum:
      return AggValue::integer(
          std::accumulate(sorted_values.begin(), sorted_values.end(), i64{0}));
    case Aggregate::Avg:
      return AggValue::ratio(
          std::accumulate(sorted_values.begin(), sorted_values.end(), i64{0}),
          n);
    case Aggregate::Median:
      if (n % 2 == 1) return AggValue::integer(sorted_values[n / 2]);
      return AggValue::half(sorted_values[n / 2 - 1] + sorted_values[n / 2]);
  }
  fail(ErrorCode::UnsupportedCombination, "unhandled aggregate");
}

}  // namespace

RepairResult brute_force_repair(const Relation& rel, const Aod& aod,
                                i64 cap) {
  auto t0 = std::chrono::steady_clock::now();
  i64 n = static_cast<i64>(rel.size());
  if (n > cap) {
    fail(ErrorCode::TooLarge, "oracle capped at " + std::to_string(cap) +
                                  " tuples, got " + std::to_string(n));
  }

  RepairResult result;
  result.algorithm = "oracle";
  result.before = check_aod(rel, aod);

  // Tuples in ascending id order; trend-ordered distinct group keys.
  std::vector<Tuple> tuples = rel.all_tuples();
  std::vector<i64> trend_keys;
  for (const Group& g : rel.groups()) trend_keys.push_back(g.key);
  if (aod.direction == Direction::Decreasing) {
    std::reverse(trend_keys.begin(), trend_keys.end());
  }

  // True iff the subset of `tuples` selected by `pick` satisfies the trend.
  auto satisfied = [&](const std::vector<i64>& pick) {
    std::vector<std::vector<i64>> buckets(trend_keys.size());
    for (i64 p : pick) {
      const Tuple& t = tuples[static_cast<std::size_t>(p)];
      for (std::size_t k = 0; k < trend_keys.size(); ++k) {
        if (trend_keys[k] == t.group) {
          buckets[k].push_back(t.value);
          break;
        }
      }
    }
    bool have_prev = false;
    AggValue prev;
    for (auto& vals : buckets) {
      if (vals.empty()) continue;  // group vanished
      std::sort(vals.begin(), vals.end());
      AggValue agg = local_aggregate(vals, aod.alpha);
      if (have_prev && agg < prev) return false;
      prev = agg;
      have_prev = true;
    }
    return true;
  };

  std::vector<i64> winner;
  bool found = false;
  for (i64 k = n; k >= 0 && !found; --k) {
    // Lexicographic k-combinations of positions 0..n-1.
    std::vector<i64> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      if (satisfied(idx)) {
        winner = idx;
        found = true;
        break;
      }
      i64 i = k - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (i64 j = i + 1; j < k; ++j) {
        idx[static_cast<std::size_t>(j)] =
            idx[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  if (!found) {
    fail(ErrorCode::CorruptBacktrace, "empty subset failed the trend check");
  }

  std::vector<i64> kept;
  kept.reserve(winner.size());
  for (i64 p : winner) kept.push_back(tuples[static_cast<std::size_t>(p)].id);
  std::sort(kept.begin(), kept.end());
  std::set<i64> kept_set(kept.begin(), kept.end());
  result.kept_ids = kept;
  result.kept_size = static_cast<i64>(kept.size());
  for (const Tuple& t : tuples) {
    if (!kept_set.count(t.id)) result.removed_ids.push_back(t.id);
  }
  result.after = check_aod(rel.restrict_to(kept), aod);
  result.runtime_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  return result;
}

}  // namespace aod
