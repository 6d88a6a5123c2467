#include "aod/packing.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <memory>
#include <set>
#include <unordered_map>

#include "aod/error.hpp"

namespace aod {

namespace {

using i64 = std::int64_t;

constexpr std::int32_t kInfeasible = -1;
// Hard cap on dense DP cells so a misconfigured input fails loudly instead of
// exhausting memory.
constexpr i64 kMaxDpCells = 200'000'000;

std::vector<Tuple> sorted_by_value(const Group& g) {
  std::vector<Tuple> s = g.tuples;
  std::sort(s.begin(), s.end(), [](const Tuple& a, const Tuple& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.id < b.id;
  });
  return s;
}

// Ascending (value, multiplicity) histogram.
std::vector<std::pair<i64, i64>> histogram(const Group& g) {
  std::map<i64, i64> cnt;
  for (const Tuple& t : g.tuples) ++cnt[t.value];
  return {cnt.begin(), cnt.end()};
}

std::vector<i64> ids_of(const std::vector<Tuple>& tuples) {
  std::vector<i64> ids;
  ids.reserve(tuples.size());
  for (const Tuple& t : tuples) ids.push_back(t.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

// For reconstruction conventions "k lowest-id tuples of value v".
std::vector<i64> lowest_ids_per_value(const Group& g,
                                      const std::map<i64, i64>& copies) {
  std::map<i64, std::vector<i64>> ids_by_value;
  for (const Tuple& t : g.tuples) ids_by_value[t.value].push_back(t.id);
  std::vector<i64> out;
  for (const auto& [v, k] : copies) {
    auto it = ids_by_value.find(v);
    if (it == ids_by_value.end() ||
        static_cast<i64>(it->second.size()) < k) {
      fail(ErrorCode::CorruptBacktrace,
           "reconstruction requested more copies of a value than exist");
    }
    std::sort(it->second.begin(), it->second.end());
    out.insert(out.end(), it->second.begin(), it->second.begin() + k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void guard_cells(i64 cells, const char* what) {
  if (cells > kMaxDpCells) {
    fail(ErrorCode::OverflowDetected,
         std::string(what) + " table would need " + std::to_string(cells) +
             " cells; input magnitudes too large for this packer");
  }
}

}  // namespace

// ---------------------------------------------------------------- PackTable

std::int64_t PackTable::size_at(const AggValue& key) const {
  auto it = sizes_.find(key);
  if (it == sizes_.end()) {
    fail(ErrorCode::InfeasibleValue,
         "no sub-bag attains aggregate value " + key.str());
  }
  return it->second;
}

std::vector<std::int64_t> PackTable::reconstruct(const AggValue& key) const {
  std::int64_t expect = size_at(key);  // throws when infeasible
  std::vector<std::int64_t> ids = recon_(key);
  if (static_cast<std::int64_t>(ids.size()) != expect) {
    fail(ErrorCode::CorruptBacktrace,
         "reconstructed size " + std::to_string(ids.size()) +
             " != table size " + std::to_string(expect) + " at key " +
             key.str());
  }
  return ids;
}

void PackTable::filter_min_size(std::int64_t min_size) {
  for (auto it = sizes_.begin(); it != sizes_.end();) {
    if (it->second < min_size) {
      it = sizes_.erase(it);
    } else {
      ++it;
    }
  }
}

// ------------------------------------------------------ single-value packers

std::vector<std::int64_t> pack_max(const Group& g, const AggValue& x) {
  bool present = false;
  for (const Tuple& t : g.tuples) {
    if (AggValue::integer(t.value) == x) {
      present = true;
      break;
    }
  }
  if (!present) {
    fail(ErrorCode::InfeasibleValue,
         "value " + x.str() + " not present in group");
  }
  std::vector<Tuple> kept;
  for (const Tuple& t : g.tuples) {
    if (AggValue::integer(t.value) <= x) kept.push_back(t);
  }
  return ids_of(kept);
}

std::vector<std::int64_t> pack_min(const Group& g, const AggValue& x) {
  bool present = false;
  for (const Tuple& t : g.tuples) {
    if (AggValue::integer(t.value) == x) {
      present = true;
      break;
    }
  }
  if (!present) {
    fail(ErrorCode::InfeasibleValue,
         "value " + x.str() + " not present in group");
  }
  std::vector<Tuple> kept;
  for (const Tuple& t : g.tuples) {
    if (AggValue::integer(t.value) >= x) kept.push_back(t);
  }
  return ids_of(kept);
}

std::vector<std::int64_t> pack_count(const Group& g, const AggValue& x) {
  i64 n = static_cast<i64>(g.size());
  if (!x.is_integral() || x.num < 1 || x.num > n) {
    fail(ErrorCode::InfeasibleValue,
         "no subset of the group has count " + x.str());
  }
  // Deterministic choice: the x lowest-id tuples.
  std::vector<i64> ids;
  for (const Tuple& t : g.tuples) ids.push_back(t.id);
  std::sort(ids.begin(), ids.end());
  ids.resize(static_cast<std::size_t>(x.num));
  return ids;
}

namespace {

// Distinct values ordered most-frequent first, frequency ties by smaller
// value; the countd packing keeps whole value classes in this order.
std::vector<std::pair<i64, i64>> countd_order(const Group& g) {
  std::vector<std::pair<i64, i64>> order = histogram(g);
  std::stable_sort(order.begin(), order.end(),
                   [](const std::pair<i64, i64>& a,
                      const std::pair<i64, i64>& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  return order;
}

}  // namespace

std::vector<std::int64_t> pack_countd(const Group& g, const AggValue& x) {
  auto order = countd_order(g);
  i64 distinct = static_cast<i64>(order.size());
  if (!x.is_integral() || x.num < 1 || x.num > distinct) {
    fail(ErrorCode::InfeasibleValue,
         "no subset of the group has " + x.str() + " distinct values");
  }
  std::set<i64> chosen;
  for (i64 i = 0; i < x.num; ++i) chosen.insert(order[i].first);
  std::vector<Tuple> kept;
  for (const Tuple& t : g.tuples) {
    if (chosen.count(t.value)) kept.push_back(t);
  }
  return ids_of(kept);
}

namespace {

// Shared core of the median packing: the best subset with median exactly x,
// described by positions in the (value, id)-sorted group.  Returns the size
// (0 = infeasible) and, when out_ids is given, the realizing tuple ids.
i64 median_pack_core(const Group& g, const AggValue& x,
                     std::vector<i64>* out_ids) {
  std::vector<Tuple> s = sorted_by_value(g);
  i64 n = static_cast<i64>(s.size());
  i64 lt = 0, eq = 0;
  for (const Tuple& t : s) {
    AggValue v = AggValue::integer(t.value);
    if (v < x) ++lt;
    else if (v == x) ++eq;
  }
  i64 gt = n - lt - eq;

  // Candidate 1: keep x itself in the bag and balance the two sides.
  i64 include_size = 0;
  i64 include_lo = 0, include_hi = 0;  // positions [lo, hi) in s
  if (eq > 0) {
    if (std::llabs(gt - lt) <= eq - 1) {
      include_size = n;
      include_lo = 0;
      include_hi = n;
    } else if (gt > lt) {
      include_size = 2 * (lt + eq) - 1;
      include_lo = 0;
      include_hi = include_size;
    } else {
      include_size = 2 * (gt + eq) - 1;
      include_lo = n - include_size;
      include_hi = n;
    }
  }

  // Candidate 2: x as the midpoint of a distinct value pair va < vb.
  auto hist = histogram(g);
  i64 d = static_cast<i64>(hist.size());
  std::vector<i64> prefix(d + 1, 0);  // prefix[i] = #values among first i classes
  for (i64 i = 0; i < d; ++i) prefix[i + 1] = prefix[i] + hist[i].second;
  i64 exclude_size = 0;
  i64 exclude_take = 0, exclude_left = 0, exclude_right = 0;
  for (i64 a = 0; a < d; ++a) {
    for (i64 b = a + 1; b < d; ++b) {
      if (AggValue::half(hist[a].first + hist[b].first) != x) continue;
      i64 k_left = prefix[a + 1];        // values <= va
      i64 k_right = n - prefix[b];       // values >= vb
      i64 take = std::min(k_left, k_right);
      if (2 * take > exclude_size) {
        exclude_size = 2 * take;
        exclude_take = take;
        exclude_left = k_left;
        exclude_right = k_right;
      }
    }
  }

  if (include_size == 0 && exclude_size == 0) return 0;
  if (out_ids) {
    std::vector<Tuple> kept;
    if (include_size >= exclude_size) {
      kept.assign(s.begin() + include_lo, s.begin() + include_hi);
    } else {
      // The `take` tuples nearest the pivot from each side: the top of the
      // <= va block and the bottom of the >= vb block.
      kept.assign(s.begin() + (exclude_left - exclude_take),
                  s.begin() + exclude_left);
      kept.insert(kept.end(), s.begin() + (n - exclude_right),
                  s.begin() + (n - exclude_right + exclude_take));
    }
    *out_ids = ids_of(kept);
  }
  return std::max(include_size, exclude_size);
}

}  // namespace

std::vector<std::int64_t> pack_median_naive(const Group& g, const AggValue& x) {
  std::vector<i64> ids;
  i64 size = median_pack_core(g, x, &ids);
  if (size == 0) {
    fail(ErrorCode::InfeasibleValue,
         "no sub-bag has median " + x.str());
  }
  return ids;
}

// ------------------------------------------------------------ wholepack sum

namespace {

struct SumDpState {
  std::vector<std::pair<i64, i64>> hist;     // ascending (value, count)
  std::vector<std::int32_t> m;               // final sizes, index = sum
  std::vector<std::vector<std::int32_t>> d;  // copies of hist[j] used at sum s
  i64 invariant_violations = 0;
};

std::shared_ptr<SumDpState> run_sum_dp(const Group& g, bool check_invariants) {
  auto st = std::make_shared<SumDpState>();
  st->hist = histogram(g);
  i64 total = 0;
  for (const auto& [v, c] : st->hist) {
    if (v <= 0) {
      fail(ErrorCode::NonPositiveValue,
           "optimized sum packing requires strictly positive values, got " +
               std::to_string(v));
    }
    total += v * c;
  }
  guard_cells((total + 1) * (static_cast<i64>(st->hist.size()) + 1),
              "sum packing");

  st->m.assign(total + 1, kInfeasible);
  st->m[0] = 0;
  st->d.assign(st->hist.size(), std::vector<std::int32_t>(total + 1, 0));

  std::vector<std::int32_t> next;
  i64 z = 0;  // running sum of the value classes handled so far
  for (std::size_t j = 0; j < st->hist.size(); ++j) {
    const auto [v, c] = st->hist[j];
    z += v * c;
    next = st->m;
    auto& row = st->d[j];
    for (i64 s = v; s <= z; ++s) {
      std::int32_t used = row[s - v];
      if (used == c) {
        // Every copy is already committed at s-v; probe each copy count
        // directly against the row being written.
        for (i64 u2 = 1; u2 <= c; ++u2) {
          i64 r = s - u2 * v;
          if (r >= 0 && st->m[r] >= 0 && st->m[r] + u2 > next[s]) {
            next[s] = static_cast<std::int32_t>(st->m[r] + u2);
            row[s] = static_cast<std::int32_t>(u2);
          }
        }
      } else {
        i64 s_prev = s - (static_cast<i64>(used) + 1) * v;
        if (s_prev >= 0 && st->m[s_prev] >= 0 &&
            st->m[s_prev] + used + 1 > st->m[s]) {
          next[s] = static_cast<std::int32_t>(st->m[s_prev] + used + 1);
          row[s] = static_cast<std::int32_t>(used + 1);
        }
      }
    }
    if (check_invariants) {
      // Copy-chain structure: when the predecessor sum has spare copies, the
      // stored count can only be 0 or one more than the predecessor's.
      for (i64 s = v; s <= z; ++s) {
        std::int32_t prev = row[s - v];
        if (prev != c && row[s] != 0 && row[s] != prev + 1) {
          ++st->invariant_violations;
        }
      }
    }
    st->m = next;
  }
  return st;
}

std::map<i64, i64> sum_walk_copies(const SumDpState& st, i64 s) {
  std::map<i64, i64> copies;
  for (std::size_t jj = st.hist.size(); jj-- > 0;) {
    std::int32_t u = st.d[jj][s];
    if (u > 0) {
      copies[st.hist[jj].first] = u;
      s -= static_cast<i64>(u) * st.hist[jj].first;
      if (s < 0) break;
    }
  }
  if (s != 0) {
    fail(ErrorCode::CorruptBacktrace,
         "sum backtrace did not return to the empty sub-bag");
  }
  return copies;
}

}  // namespace

PackTable wholepack_sum(const Group& g, bool check_invariants) {
  auto st = run_sum_dp(g, check_invariants);
  if (check_invariants && st->invariant_violations != 0) {
    fail(ErrorCode::CorruptBacktrace,
         "sum packing copy-chain invariant violated " +
             std::to_string(st->invariant_violations) + " times");
  }
  std::map<AggValue, i64> sizes;
  for (i64 s = 1; s < static_cast<i64>(st->m.size()); ++s) {
    if (st->m[s] >= 1) sizes[AggValue::integer(s)] = st->m[s];
  }
  Group group = g;
  auto recon = [st, group](const AggValue& key) {
    auto copies = sum_walk_copies(*st, key.num);
    return lowest_ids_per_value(group, copies);
  };
  return PackTable(static_cast<i64>(g.size()), std::move(sizes),
                   std::move(recon));
}

SumDpTrace wholepack_sum_trace(const Group& g, bool check_invariants) {
  auto st = run_sum_dp(g, check_invariants);
  SumDpTrace trace;
  trace.hist = st->hist;
  trace.final_m = st->m;
  trace.invariant_violations = st->invariant_violations;
  return trace;
}

// ------------------------------------------------------------ wholepack avg

namespace {

struct AvgDpState {
  i64 total = 0;
  i64 n = 0;
  // (remaining sum, removed count) -> (prev sum, prev count, value, copies)
  std::map<std::pair<i64, i64>, std::array<i64, 4>> back;
  // aggregate key -> winning state (remaining sum, removed count)
  std::map<AggValue, std::pair<i64, i64>> winner;
};

}  // namespace

PackTable wholepack_avg(const Group& g, std::optional<std::int64_t> h) {
  auto st = std::make_shared<AvgDpState>();
  st->n = static_cast<i64>(g.size());
  for (const Tuple& t : g.tuples) st->total += t.value;
  i64 cap = std::min(h.value_or(st->n), st->n);

  std::set<std::pair<i64, i64>> states;
  states.insert({st->total, 0});
  for (const auto& [v, c] : histogram(g)) {
    // Expand from a snapshot so each value class is applied exactly once,
    // in ascending (sum, removed) order for a deterministic first write.
    std::vector<std::pair<i64, i64>> snapshot(states.begin(), states.end());
    for (const auto& [s, l] : snapshot) {
      for (i64 k = 1; k <= c; ++k) {
        i64 l2 = l + k;
        if (l2 > cap) break;
        i64 s2 = s - k * v;
        states.insert({s2, l2});
        st->back.emplace(std::make_pair(s2, l2),
                         std::array<i64, 4>{s, l, v, k});
      }
    }
  }

  std::map<AggValue, i64> sizes;
  for (const auto& [s, l] : states) {
    i64 keep = st->n - l;
    if (keep <= 0) continue;
    AggValue key = AggValue::ratio(s, keep);
    auto it = sizes.find(key);
    if (it == sizes.end() || it->second < keep) {
      sizes[key] = keep;
      st->winner[key] = {s, l};
    }
  }

  Group group = g;
  auto recon = [st, group](const AggValue& key) {
    auto wit = st->winner.find(key);
    if (wit == st->winner.end()) {
      fail(ErrorCode::CorruptBacktrace,
           "avg backtrace has no state for key " + key.str());
    }
    auto [s, l] = wit->second;
    std::map<i64, i64> removed;
    while (l > 0) {
      auto bit = st->back.find({s, l});
      if (bit == st->back.end()) {
        fail(ErrorCode::CorruptBacktrace, "avg backtrace chain broken");
      }
      const auto& [s0, l0, v, k] = bit->second;
      removed[v] += k;
      s = s0;
      l = l0;
    }
    if (s != st->total) {
      fail(ErrorCode::CorruptBacktrace,
           "avg backtrace did not return to the full group");
    }
    std::vector<i64> removed_ids = lowest_ids_per_value(group, removed);
    std::set<i64> drop(removed_ids.begin(), removed_ids.end());
    std::vector<i64> kept;
    for (const Tuple& t : group.tuples) {
      if (!drop.count(t.id)) kept.push_back(t.id);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
  };
  return PackTable(st->n, std::move(sizes), std::move(recon));
}

// --------------------------------------------------------- wholepack median

PackTable wholepack_median(const Group& g, std::optional<std::int64_t> h) {
  std::vector<Tuple> s = sorted_by_value(g);
  i64 n = static_cast<i64>(s.size());
  i64 hv = std::min(h.value_or(n), n);
  std::map<AggValue, i64> sizes;
  auto upd = [&sizes](const AggValue& x, i64 c) {
    if (c <= 0) return;
    auto it = sizes.find(x);
    if (it == sizes.end() || it->second < c) sizes[x] = c;
  };

  // Single pivots and adjacent-position pivot pairs, restricted to the window
  // of positions that can still be a median after at most hv removals.
  i64 start = std::max<i64>(0, n / 2 - hv / 2 - 1);
  i64 end = std::min<i64>(n, n / 2 + hv / 2 + 2);
  for (i64 i = start; i < end; ++i) {
    upd(AggValue::integer(s[i].value), 2 * std::min(i, n - i - 1) + 1);
  }
  for (i64 i = start; i < std::min(end, n - 1); ++i) {
    upd(AggValue::half(s[i].value + s[i + 1].value),
        2 * std::min(i, n - i - 2) + 2);
  }

  // Distinct-value pivot pairs.  A pair needs min(k_left, k_right) kept on
  // each side; sides too small to reach size n-hv are skipped (strictly —
  // exactly-hv-removal entries must survive).
  auto hist = histogram(g);
  i64 k_left = 0;
  for (std::size_t a = 0; a < hist.size(); ++a) {
    k_left += hist[a].second;
    i64 k_right = n - k_left;
    if (2 * k_left < n - hv) continue;
    for (std::size_t b = a + 1; b < hist.size(); ++b) {
      if (2 * k_right >= n - hv) {
        upd(AggValue::half(hist[a].first + hist[b].first),
            2 * std::min(k_left, k_right));
      }
      k_right -= hist[b].second;
    }
  }

  Group group = g;
  auto recon = [group](const AggValue& key) {
    return pack_median_naive(group, key);
  };
  return PackTable(n, std::move(sizes), std::move(recon));
}

// ------------------------------------------------------------ naive sum/avg

namespace {

struct NaiveSumState {
  std::vector<Tuple> tuples;  // id order
  i64 lo = 0;                 // smallest reachable sum (sum of negatives)
  std::vector<std::vector<std::int32_t>> m;  // [j][sum - lo]
};

}  // namespace

PackTable naive_sum_dp(const Group& g) {
  auto st = std::make_shared<NaiveSumState>();
  st->tuples = g.tuples;
  std::sort(st->tuples.begin(), st->tuples.end(),
            [](const Tuple& a, const Tuple& b) { return a.id < b.id; });
  i64 n = static_cast<i64>(st->tuples.size());
  i64 hi = 0;
  for (const Tuple& t : st->tuples) {
    if (t.value < 0) st->lo += t.value;
    else hi += t.value;
  }
  i64 width = hi - st->lo + 1;
  guard_cells((n + 1) * width, "naive sum");
  st->m.assign(n + 1, std::vector<std::int32_t>(width, kInfeasible));
  st->m[0][-st->lo] = 0;
  for (i64 j = 1; j <= n; ++j) {
    i64 v = st->tuples[j - 1].value;
    for (i64 idx = 0; idx < width; ++idx) {
      std::int32_t best = st->m[j - 1][idx];
      i64 from = idx - v;
      if (from >= 0 && from < width && st->m[j - 1][from] >= 0 &&
          st->m[j - 1][from] + 1 > best) {
        best = st->m[j - 1][from] + 1;
      }
      st->m[j][idx] = best;
    }
  }

  std::map<AggValue, i64> sizes;
  for (i64 idx = 0; idx < width; ++idx) {
    if (st->m[n][idx] >= 1) sizes[AggValue::integer(idx + st->lo)] = st->m[n][idx];
  }
  auto recon = [st, n](const AggValue& key) {
    i64 idx = key.num - st->lo;
    std::vector<i64> kept;
    for (i64 j = n; j >= 1; --j) {
      // Prefer excluding the tuple, so removals land on the highest ids.
      if (st->m[j - 1][idx] == st->m[j][idx]) continue;
      kept.push_back(st->tuples[j - 1].id);
      idx -= st->tuples[j - 1].value;
    }
    if (idx != -st->lo) {
      fail(ErrorCode::CorruptBacktrace,
           "naive sum backtrace did not return to the empty sub-bag");
    }
    std::sort(kept.begin(), kept.end());
    return kept;
  };
  return PackTable(n, std::move(sizes), std::move(recon));
}

namespace {

struct NaiveAvgState {
  std::vector<Tuple> tuples;  // id order
  i64 lo = 0;
  i64 width = 0;
  // reach[j][l][sum - lo]: some size-l subset of the first j tuples sums there
  std::vector<std::vector<std::vector<char>>> reach;
  std::map<AggValue, std::pair<i64, i64>> winner;  // key -> (l, sum)
};

}  // namespace

PackTable naive_avg_dp(const Group& g) {
  auto st = std::make_shared<NaiveAvgState>();
  st->tuples = g.tuples;
  std::sort(st->tuples.begin(), st->tuples.end(),
            [](const Tuple& a, const Tuple& b) { return a.id < b.id; });
  i64 n = static_cast<i64>(st->tuples.size());
  i64 hi = 0;
  for (const Tuple& t : st->tuples) {
    if (t.value < 0) st->lo += t.value;
    else hi += t.value;
  }
  st->width = hi - st->lo + 1;
  guard_cells((n + 1) * (n + 1) * st->width, "naive avg");
  st->reach.assign(
      n + 1, std::vector<std::vector<char>>(
                 n + 1, std::vector<char>(st->width, 0)));
  st->reach[0][0][-st->lo] = 1;
  for (i64 j = 1; j <= n; ++j) {
    i64 v = st->tuples[j - 1].value;
    for (i64 l = 0; l <= j; ++l) {
      for (i64 idx = 0; idx < st->width; ++idx) {
        char ok = st->reach[j - 1][l][idx];
        if (!ok && l >= 1) {
          i64 from = idx - v;
          if (from >= 0 && from < st->width && st->reach[j - 1][l - 1][from]) {
            ok = 1;
          }
        }
        st->reach[j][l][idx] = ok;
      }
    }
  }

  std::map<AggValue, i64> sizes;
  for (i64 l = 1; l <= n; ++l) {
    for (i64 idx = 0; idx < st->width; ++idx) {
      if (!st->reach[n][l][idx]) continue;
      AggValue key = AggValue::ratio(idx + st->lo, l);
      auto it = sizes.find(key);
      if (it == sizes.end() || it->second < l) {
        sizes[key] = l;
        st->winner[key] = {l, idx + st->lo};
      }
    }
  }
  auto recon = [st, n](const AggValue& key) {
    auto wit = st->winner.find(key);
    if (wit == st->winner.end()) {
      fail(ErrorCode::CorruptBacktrace,
           "naive avg backtrace has no state for key " + key.str());
    }
    auto [l, sum] = wit->second;
    i64 idx = sum - st->lo;
    std::vector<i64> kept;
    for (i64 j = n; j >= 1; --j) {
      // Prefer including the tuple, so removals land on the lowest ids.
      i64 v = st->tuples[j - 1].value;
      i64 from = idx - v;
      if (l >= 1 && from >= 0 && from < st->width &&
          st->reach[j - 1][l - 1][from]) {
        kept.push_back(st->tuples[j - 1].id);
        idx = from;
        --l;
      } else if (!st->reach[j - 1][l][idx]) {
        fail(ErrorCode::CorruptBacktrace, "naive avg backtrace chain broken");
      }
    }
    if (l != 0 || idx != -st->lo) {
      fail(ErrorCode::CorruptBacktrace,
           "naive avg backtrace did not return to the empty sub-bag");
    }
    std::sort(kept.begin(), kept.end());
    return kept;
  };
  return PackTable(n, std::move(sizes), std::move(recon));
}

// -------------------------------------------------- bounded removal tables

namespace {

constexpr std::int32_t kNoPath = std::numeric_limits<std::int32_t>::max() / 2;

PackTable bounded_removal_sum(const Group& g, i64 h) {
  auto tuples = std::make_shared<std::vector<Tuple>>(g.tuples);
  std::sort(tuples->begin(), tuples->end(),
            [](const Tuple& a, const Tuple& b) { return a.id < b.id; });
  i64 n = static_cast<i64>(tuples->size());
  i64 lo = 0, hi = 0, total = 0;
  for (const Tuple& t : *tuples) {
    total += t.value;
    if (t.value < 0) lo += t.value;
    else hi += t.value;
  }
  i64 width = hi - lo + 1;
  guard_cells((n + 1) * width, "bounded sum");
  // removals[j][r - lo] = fewest removals among the first j tuples whose
  // removed values sum to r.
  auto removals = std::make_shared<std::vector<std::vector<std::int32_t>>>(
      n + 1, std::vector<std::int32_t>(width, kNoPath));
  (*removals)[0][-lo] = 0;
  for (i64 j = 1; j <= n; ++j) {
    i64 v = (*tuples)[j - 1].value;
    for (i64 idx = 0; idx < width; ++idx) {
      std::int32_t best = (*removals)[j - 1][idx];
      i64 from = idx - v;
      if (from >= 0 && from < width && (*removals)[j - 1][from] < kNoPath &&
          (*removals)[j - 1][from] + 1 < best) {
        best = (*removals)[j - 1][from] + 1;
      }
      (*removals)[j][idx] = best;
    }
  }

  std::map<AggValue, i64> sizes;
  for (i64 idx = 0; idx < width; ++idx) {
    std::int32_t rem = (*removals)[n][idx];
    if (rem >= kNoPath || rem > h || n - rem < 1) continue;
    sizes[AggValue::integer(total - (idx + lo))] = n - rem;
  }
  auto recon = [tuples, removals, total, lo, width, n](const AggValue& key) {
    i64 idx = (total - key.num) - lo;
    std::set<i64> removed;
    for (i64 j = n; j >= 1; --j) {
      // Prefer removing the tuple, so kept ids are the lowest.
      i64 v = (*tuples)[j - 1].value;
      i64 from = idx - v;
      if (from >= 0 && from < width && (*removals)[j - 1][from] < kNoPath &&
          (*removals)[j - 1][from] + 1 == (*removals)[j][idx]) {
        removed.insert((*tuples)[j - 1].id);
        idx = from;
      }
    }
    if (idx != -lo) {
      fail(ErrorCode::CorruptBacktrace,
           "bounded sum backtrace did not return to the full group");
    }
    std::vector<i64> kept;
    for (const Tuple& t : *tuples) {
      if (!removed.count(t.id)) kept.push_back(t.id);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
  };
  return PackTable(n, std::move(sizes), std::move(recon));
}

struct BoundedAvgState {
  std::vector<Tuple> tuples;
  i64 lo = 0;
  i64 width = 0;
  i64 total = 0;
  // reach[j][l][r - lo]: the first j tuples contain l removable tuples
  // whose values sum to r.
  std::vector<std::vector<std::vector<char>>> reach;
  std::map<AggValue, std::pair<i64, i64>> winner;  // key -> (l, removed sum)
};

PackTable bounded_removal_avg(const Group& g, i64 h) {
  auto st = std::make_shared<BoundedAvgState>();
  st->tuples = g.tuples;
  std::sort(st->tuples.begin(), st->tuples.end(),
            [](const Tuple& a, const Tuple& b) { return a.id < b.id; });
  i64 n = static_cast<i64>(st->tuples.size());
  i64 hi = 0;
  for (const Tuple& t : st->tuples) {
    st->total += t.value;
    if (t.value < 0) st->lo += t.value;
    else hi += t.value;
  }
  st->width = hi - st->lo + 1;
  i64 lcap = std::min(h, n);
  guard_cells((n + 1) * (lcap + 1) * st->width, "bounded avg");
  st->reach.assign(
      n + 1, std::vector<std::vector<char>>(
                 lcap + 1, std::vector<char>(st->width, 0)));
  st->reach[0][0][-st->lo] = 1;
  for (i64 j = 1; j <= n; ++j) {
    i64 v = st->tuples[j - 1].value;
    for (i64 l = 0; l <= lcap; ++l) {
      for (i64 idx = 0; idx < st->width; ++idx) {
        char ok = st->reach[j - 1][l][idx];
        if (!ok && l >= 1) {
          i64 from = idx - v;
          if (from >= 0 && from < st->width && st->reach[j - 1][l - 1][from]) {
            ok = 1;
          }
        }
        st->reach[j][l][idx] = ok;
      }
    }
  }

  std::map<AggValue, i64> sizes;
  for (i64 l = 0; l <= std::min(lcap, n - 1); ++l) {
    for (i64 idx = 0; idx < st->width; ++idx) {
      if (!st->reach[n][l][idx]) continue;
      i64 keep = n - l;
      AggValue key = AggValue::ratio(st->total - (idx + st->lo), keep);
      if (!sizes.count(key)) {  // ascending l: first hit has the max size
        sizes[key] = keep;
        st->winner[key] = {l, idx + st->lo};
      }
    }
  }
  auto recon = [st, n](const AggValue& key) {
    auto wit = st->winner.find(key);
    if (wit == st->winner.end()) {
      fail(ErrorCode::CorruptBacktrace,
           "bounded avg backtrace has no state for key " + key.str());
    }
    auto [l, rsum] = wit->second;
    i64 idx = rsum - st->lo;
    std::set<i64> removed;
    for (i64 j = n; j >= 1; --j) {
      // Prefer keeping the tuple, so removals land on the lowest ids.
      if (st->reach[j - 1][l][idx]) continue;
      i64 v = st->tuples[j - 1].value;
      i64 from = idx - v;
      if (l >= 1 && from >= 0 && from < st->width &&
          st->reach[j - 1][l - 1][from]) {
        removed.insert(st->tuples[j - 1].id);
        idx = from;
        --l;
      } else {
        fail(ErrorCode::CorruptBacktrace, "bounded avg backtrace chain broken");
      }
    }
    if (l != 0 || idx != -st->lo) {
      fail(ErrorCode::CorruptBacktrace,
           "bounded avg backtrace did not return to the full group");
    }
    std::vector<i64> kept;
    for (const Tuple& t : st->tuples) {
      if (!removed.count(t.id)) kept.push_back(t.id);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
  };
  return PackTable(n, std::move(sizes), std::move(recon));
}

}  // namespace

PackTable bounded_removal_tables(const Group& g, Aggregate alpha,
                                 std::int64_t h) {
  if (h < 0) {
    fail(ErrorCode::InvalidParams, "removal bound must be non-negative");
  }
  switch (alpha) {
    case Aggregate::Sum: return bounded_removal_sum(g, h);
    case Aggregate::Avg: return bounded_removal_avg(g, h);
    default:
      fail(ErrorCode::UnsupportedCombination,
           std::string("bounded removal tables cover sum and avg only, not ") +
               aggregate_name(alpha));
  }
}

// ----------------------------------------------- closed-form simple tables

namespace {

PackTable table_max(const Group& g) {
  auto hist = histogram(g);
  std::map<AggValue, i64> sizes;
  i64 run = 0;
  for (const auto& [v, c] : hist) {
    run += c;
    sizes[AggValue::integer(v)] = run;  // everything <= v
  }
  Group group = g;
  auto recon = [group](const AggValue& key) { return pack_max(group, key); };
  return PackTable(static_cast<i64>(g.size()), std::move(sizes),
                   std::move(recon));
}

PackTable table_min(const Group& g) {
  auto hist = histogram(g);
  i64 n = static_cast<i64>(g.size());
  std::map<AggValue, i64> sizes;
  i64 below = 0;
  for (const auto& [v, c] : hist) {
    sizes[AggValue::integer(v)] = n - below;  // everything >= v
    below += c;
  }
  Group group = g;
  auto recon = [group](const AggValue& key) { return pack_min(group, key); };
  return PackTable(n, std::move(sizes), std::move(recon));
}

PackTable table_count(const Group& g) {
  i64 n = static_cast<i64>(g.size());
  std::map<AggValue, i64> sizes;
  for (i64 k = 1; k <= n; ++k) sizes[AggValue::count(k)] = k;
  Group group = g;
  auto recon = [group](const AggValue& key) { return pack_count(group, key); };
  return PackTable(n, std::move(sizes), std::move(recon));
}

PackTable table_countd(const Group& g) {
  auto order = countd_order(g);
  std::map<AggValue, i64> sizes;
  i64 run = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    run += order[i].second;
    sizes[AggValue::count(static_cast<i64>(i) + 1)] = run;
  }
  Group group = g;
  auto recon = [group](const AggValue& key) { return pack_countd(group, key); };
  return PackTable(static_cast<i64>(g.size()), std::move(sizes),
                   std::move(recon));
}

PackTable table_median_naive(const Group& g) {
  // Candidate keys: every present value and every distinct-value midpoint;
  // each candidate is packed independently by the per-value routine.
  auto hist = histogram(g);
  std::set<AggValue> candidates;
  for (const auto& [v, c] : hist) candidates.insert(AggValue::integer(v));
  for (std::size_t a = 0; a < hist.size(); ++a) {
    for (std::size_t b = a + 1; b < hist.size(); ++b) {
      candidates.insert(AggValue::half(hist[a].first + hist[b].first));
    }
  }
  std::map<AggValue, i64> sizes;
  for (const AggValue& x : candidates) {
    i64 size = median_pack_core(g, x, nullptr);
    if (size > 0) sizes[x] = size;
  }
  Group group = g;
  auto recon = [group](const AggValue& key) {
    return pack_median_naive(group, key);
  };
  return PackTable(static_cast<i64>(g.size()), std::move(sizes),
                   std::move(recon));
}

}  // namespace

PackTable wholepack_naive(const Group& g, Aggregate alpha) {
  switch (alpha) {
    case Aggregate::Max: return table_max(g);
    case Aggregate::Min: return table_min(g);
    case Aggregate::Count: return table_count(g);
    case Aggregate::CountDistinct: return table_countd(g);
    case Aggregate::Sum: return naive_sum_dp(g);
    case Aggregate::Avg: return naive_avg_dp(g);
    case Aggregate::Median: return table_median_naive(g);
  }
  fail(ErrorCode::UnsupportedCombination, "unhandled aggregate");
}

PackTable build_pack_table(const Group& g, Aggregate alpha, PackerKind kind,
                           std::optional<std::int64_t> h,
                           bool check_invariants, bool allow_fallback) {
  PackTable table;
  if (kind == PackerKind::Naive) {
    table = wholepack_naive(g, alpha);
  } else {
    switch (alpha) {
      case Aggregate::Max: table = table_max(g); break;
      case Aggregate::Min: table = table_min(g); break;
      case Aggregate::Count: table = table_count(g); break;
      case Aggregate::CountDistinct: table = table_countd(g); break;
      case Aggregate::Sum: {
        bool positive = true;
        for (const Tuple& t : g.tuples) {
          if (t.value <= 0) {
            positive = false;
            break;
          }
        }
        if (positive) {
          table = wholepack_sum(g, check_invariants);
        } else if (allow_fallback) {
          table = naive_sum_dp(g);
        } else {
          fail(ErrorCode::UnsupportedCombination,
               "optimized sum packing needs strictly positive values and the "
               "naive fallback is disabled");
        }
        break;
      }
      case Aggregate::Avg: table = wholepack_avg(g, h); break;
      case Aggregate::Median: table = wholepack_median(g, h); break;
    }
  }
  if (h) {
    table.filter_min_size(static_cast<i64>(g.size()) - *h);
  }
  return table;
}

}  // namespace aod
