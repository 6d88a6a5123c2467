#pragma once

// Shared builders for the test suites: golden relations, random instances,
// and an enumeration-based packing reference that shares no code with the
// library's packers.

#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "aod/relation.hpp"
#include "aod/value.hpp"

namespace testutil {

using aod::AggValue;
using aod::Aggregate;
using aod::Aod;
using aod::Direction;
using aod::Group;
using aod::Relation;
using aod::Tuple;
using i64 = std::int64_t;

// Relation from (group, value) rows; ids are the 0-based row positions.
inline Relation make_rel(const std::vector<std::pair<i64, i64>>& rows) {
  std::vector<Tuple> tuples;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    tuples.push_back(Tuple{static_cast<i64>(i), rows[i].first,
                           rows[i].second});
  }
  return Relation::from_tuples(std::move(tuples));
}

inline Group make_group(i64 key, const std::vector<i64>& values) {
  Group g;
  g.key = key;
  for (std::size_t i = 0; i < values.size(); ++i) {
    g.tuples.push_back(Tuple{static_cast<i64>(i), key, values[i]});
  }
  return g;
}

// The worked income example: ids 0..13 = Ashley..Nathan; Daniel=3, Emily=4.
inline std::vector<std::pair<i64, i64>> table1_rows() {
  return {{1, 1}, {1, 2}, {2, 2}, {2, 5}, {2, 6}, {2, 5}, {2, 2},
          {3, 8}, {3, 4}, {3, 3}, {3, 2}, {3, 2}, {3, 1}, {3, 1}};
}

inline std::vector<std::pair<i64, i64>> ex4_rows() {
  return {{1, 3}, {1, 4}, {2, 2}, {2, 3}, {2, 4}, {3, 1}, {3, 2}};
}

inline std::vector<std::pair<i64, i64>> appe_rows() {
  return {{1, 7}, {1, 8}, {1, 9}, {1, 10}, {1, 11},
          {2, 1}, {2, 5}, {2, 5}, {2, 5}, {2, 10}};
}

inline i64 draw(std::mt19937_64& rng, i64 lo, i64 hi) {
  return lo + static_cast<i64>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

struct RandomInstance {
  Relation rel;
  Aod aod;
};

// Small instance in the oracle-equivalence regime: n <= 14, 2..4 groups,
// values 1..8, either direction.
inline RandomInstance random_instance(std::mt19937_64& rng, Aggregate alpha,
                                      i64 max_n = 14) {
  i64 n = draw(rng, 1, max_n);
  i64 groups = draw(rng, 2, 4);
  std::vector<std::pair<i64, i64>> rows;
  for (i64 i = 0; i < n; ++i) {
    rows.push_back({draw(rng, 0, groups - 1), draw(rng, 1, 8)});
  }
  RandomInstance inst;
  inst.rel = make_rel(rows);
  inst.aod.alpha = alpha;
  inst.aod.direction =
      rng() % 2 == 0 ? Direction::Increasing : Direction::Decreasing;
  return inst;
}

// Independent aggregate of a value list (sorted internally).
inline AggValue ref_aggregate(std::vector<i64> values, Aggregate alpha) {
  std::sort(values.begin(), values.end());
  i64 n = static_cast<i64>(values.size());
  switch (alpha) {
    case Aggregate::Max: return AggValue::integer(values.back());
    case Aggregate::Min: return AggValue::integer(values.front());
    case Aggregate::Count: return AggValue::count(n);
    case Aggregate::CountDistinct:
      return AggValue::count(
          static_cast<i64>(std::set<i64>(values.begin(), values.end()).size()));
    case Aggregate::Sum:
      return AggValue::integer(
          std::accumulate(values.begin(), values.end(), i64{0}));
    case Aggregate::Avg:
      return AggValue::ratio(
          std::accumulate(values.begin(), values.end(), i64{0}), n);
    case Aggregate::Median:
      if (n % 2 == 1) return AggValue::integer(values[n / 2]);
      return AggValue::half(values[n / 2 - 1] + values[n / 2]);
  }
  return AggValue::zero();
}

// Enumeration reference for packing: best sub-bag size per attainable
// aggregate value, by trying all 2^n - 1 non-empty subsets.
inline std::map<AggValue, i64> enum_pack_sizes(const Group& g,
                                               Aggregate alpha) {
  std::map<AggValue, i64> best;
  i64 n = static_cast<i64>(g.tuples.size());
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<i64> values;
    for (i64 i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) values.push_back(g.tuples[i].value);
    }
    AggValue key = ref_aggregate(values, alpha);
    i64 size = static_cast<i64>(values.size());
    auto it = best.find(key);
    if (it == best.end() || it->second < size) best[key] = size;
  }
  return best;
}

inline const std::vector<Aggregate>& all_aggregates() {
  static const std::vector<Aggregate> all = {
      Aggregate::Max,  Aggregate::Min, Aggregate::Count,
      Aggregate::CountDistinct, Aggregate::Sum, Aggregate::Avg,
      Aggregate::Median};
  return all;
}

}  // namespace testutil
