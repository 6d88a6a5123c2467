#include "aod/heur_repair.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "aod/error.hpp"

namespace aod {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

// Live view of one group: the surviving (value, id) pairs in ascending value
// order plus the caches the per-aggregate impact formulas need.
struct GState {
  i64 key = 0;
  i64 index = 0;  // trend position, fixed at construction
  std::vector<std::pair<i64, i64>> live;
  i64 sum = 0;
  std::map<i64, i64> hist;

  i64 size() const { return static_cast<i64>(live.size()); }
  bool alive() const { return !live.empty(); }
};

AggValue agg_of(const GState& g, Aggregate alpha) {
  i64 n = g.size();
  switch (alpha) {
    case Aggregate::Max: return AggValue::integer(g.live.back().first);
    case Aggregate::Min: return AggValue::integer(g.live.front().first);
    case Aggregate::Count: return AggValue::count(n);
    case Aggregate::CountDistinct:
      return AggValue::count(static_cast<i64>(g.hist.size()));
    case Aggregate::Sum: return AggValue::integer(g.sum);
    case Aggregate::Avg: return AggValue::ratio(g.sum, n);
    case Aggregate::Median:
      if (n % 2 == 1) return AggValue::integer(g.live[n / 2].first);
      return AggValue::half(g.live[n / 2 - 1].first + g.live[n / 2].first);
  }
  fail(ErrorCode::UnsupportedCombination, "unhandled aggregate");
}

// Aggregate after removing the single tuple at sorted position j (value v);
// empty optional = the group vanishes.
std::optional<AggValue> agg_after_single(const GState& g, Aggregate alpha,
                                         i64 v, i64 j) {
  i64 n = g.size();
  if (n == 1) return std::nullopt;
  switch (alpha) {
    case Aggregate::Max: {
      i64 vmax = g.live.back().first;
      if (v < vmax || g.hist.at(vmax) > 1) return AggValue::integer(vmax);
      return AggValue::integer(g.live[n - 2].first);
    }
    case Aggregate::Min: {
      i64 vmin = g.live.front().first;
      if (v > vmin || g.hist.at(vmin) > 1) return AggValue::integer(vmin);
      return AggValue::integer(g.live[1].first);
    }
    case Aggregate::Count: return AggValue::count(n - 1);
    case Aggregate::CountDistinct: {
      i64 d = static_cast<i64>(g.hist.size());
      return AggValue::count(g.hist.at(v) > 1 ? d : d - 1);
    }
    case Aggregate::Sum: return AggValue::integer(g.sum - v);
    case Aggregate::Avg: return AggValue::ratio(g.sum - v, n - 1);
    case Aggregate::Median: {
      const auto& L = g.live;
      if (n % 2 == 0) {
        i64 m = n / 2;
        return AggValue::integer(j < m ? L[m].first : L[m - 1].first);
      }
      i64 m = (n - 1) / 2;
      if (j < m) return AggValue::half(L[m].first + L[m + 1].first);
      if (j == m) return AggValue::half(L[m - 1].first + L[m + 1].first);
      return AggValue::half(L[m - 1].first + L[m].first);
    }
  }
  fail(ErrorCode::UnsupportedCombination, "unhandled aggregate");
}

bool is_monotone_under_removal(Aggregate alpha) {
  // Removing tuples can only lower (or keep) these aggregates, so only the
  // left group of a violating pair is worth touching.
  return alpha == Aggregate::Max || alpha == Aggregate::Count ||
         alpha == Aggregate::CountDistinct || alpha == Aggregate::Sum;
}

struct Chain {
  std::vector<i64> state_idx;  // alive states, trend order
  std::vector<AggValue> aggs;
  AggValue s_mvi;
};

Chain build_chain(const std::vector<GState>& states, Aggregate alpha) {
  Chain c;
  c.s_mvi = AggValue::zero();
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!states[i].alive()) continue;
    c.state_idx.push_back(static_cast<i64>(i));
    c.aggs.push_back(agg_of(states[i], alpha));
  }
  for (std::size_t i = 0; i + 1 < c.aggs.size(); ++i) {
    c.s_mvi = c.s_mvi + compute_mvi(c.aggs[i], c.aggs[i + 1]);
  }
  return c;
}

// Exact impact of replacing chain position p's aggregate by new_agg
// (vanished when empty): only the adjacent violation terms change.
AggValue impact_at(const Chain& c, std::size_t p,
                   const std::optional<AggValue>& new_agg) {
  AggValue before = AggValue::zero();
  AggValue after = AggValue::zero();
  bool has_left = p > 0;
  bool has_right = p + 1 < c.aggs.size();
  if (has_left) before = before + compute_mvi(c.aggs[p - 1], c.aggs[p]);
  if (has_right) before = before + compute_mvi(c.aggs[p], c.aggs[p + 1]);
  if (new_agg) {
    if (has_left) after = after + compute_mvi(c.aggs[p - 1], *new_agg);
    if (has_right) after = after + compute_mvi(*new_agg, c.aggs[p + 1]);
  } else if (has_left && has_right) {
    after = compute_mvi(c.aggs[p - 1], c.aggs[p + 1]);
  }
  return before - after;
}

// Representative for a batch of equal-impact tuples in sorted positions
// [lo, hi): the global tie rule's favourite — highest value, lowest id.
std::pair<i64, i64> region_representative(const GState& g, i64 lo, i64 hi) {
  i64 top_value = g.live[hi - 1].first;
  i64 run = hi - 1;
  while (run > lo && g.live[run - 1].first == top_value) --run;
  return g.live[run];
}

void add_singleton(std::vector<Candidate>& out, const GState& g,
                   const Chain& c, std::size_t p, Aggregate alpha, i64 v,
                   i64 id, i64 j) {
  Candidate cand;
  cand.group_key = g.key;
  cand.group_index = g.index;
  cand.value = v;
  cand.ids = {id};
  cand.impact = impact_at(c, p, agg_after_single(g, alpha, v, j));
  out.push_back(std::move(cand));
}

std::vector<Candidate> candidates_for(const std::vector<GState>& states,
                                      const Chain& c, Aggregate alpha,
                                      bool optimized) {
  std::vector<Candidate> out;
  if (!optimized) {
    for (std::size_t p = 0; p < c.state_idx.size(); ++p) {
      const GState& g = states[c.state_idx[p]];
      for (i64 j = 0; j < g.size(); ++j) {
        add_singleton(out, g, c, p, alpha, g.live[j].first, g.live[j].second,
                      j);
      }
    }
    return out;
  }

  std::set<std::size_t> targets;
  for (std::size_t p = 0; p + 1 < c.aggs.size(); ++p) {
    if (compute_mvi(c.aggs[p], c.aggs[p + 1]).is_zero()) continue;
    targets.insert(p);
    if (!is_monotone_under_removal(alpha)) targets.insert(p + 1);
  }

  for (std::size_t p : targets) {
    const GState& g = states[c.state_idx[p]];
    i64 n = g.size();
    switch (alpha) {
      case Aggregate::Max: {
        i64 vmax = g.live.back().first;
        i64 copies = g.hist.at(vmax);
        Candidate cand;
        cand.group_key = g.key;
        cand.group_index = g.index;
        cand.value = vmax;
        for (i64 j = n - copies; j < n; ++j) cand.ids.push_back(g.live[j].second);
        std::sort(cand.ids.begin(), cand.ids.end());
        std::optional<AggValue> next;
        if (copies < n) next = AggValue::integer(g.live[n - copies - 1].first);
        cand.impact = impact_at(c, p, next);
        out.push_back(std::move(cand));
        break;
      }
      case Aggregate::Min: {
        i64 vmin = g.live.front().first;
        i64 copies = g.hist.at(vmin);
        Candidate cand;
        cand.group_key = g.key;
        cand.group_index = g.index;
        cand.value = vmin;
        for (i64 j = 0; j < copies; ++j) cand.ids.push_back(g.live[j].second);
        std::sort(cand.ids.begin(), cand.ids.end());
        std::optional<AggValue> next;
        if (copies < n) next = AggValue::integer(g.live[copies].first);
        cand.impact = impact_at(c, p, next);
        out.push_back(std::move(cand));
        break;
      }
      case Aggregate::Count: {
        // Every tuple has the same impact; one representative suffices.
        auto rep = region_representative(g, 0, n);
        add_singleton(out, g, c, p, alpha, rep.first, rep.second, 0);
        break;
      }
      case Aggregate::CountDistinct: {
        i64 least_v = 0, least_c = -1;
        for (const auto& [v, cnt] : g.hist) {
          if (least_c < 0 || cnt < least_c) {
            least_c = cnt;
            least_v = v;
          }
        }
        Candidate cand;
        cand.group_key = g.key;
        cand.group_index = g.index;
        cand.value = least_v;
        for (const auto& [v, id] : g.live) {
          if (v == least_v) cand.ids.push_back(id);
        }
        std::sort(cand.ids.begin(), cand.ids.end());
        std::optional<AggValue> next;
        if (g.hist.size() > 1) {
          next = AggValue::count(static_cast<i64>(g.hist.size()) - 1);
        }
        cand.impact = impact_at(c, p, next);
        out.push_back(std::move(cand));
        break;
      }
      case Aggregate::Sum:
      case Aggregate::Avg: {
        for (i64 j = 0; j < n; ++j) {
          add_singleton(out, g, c, p, alpha, g.live[j].first, g.live[j].second,
                        j);
        }
        break;
      }
      case Aggregate::Median: {
        // Impacts are constant within each of the three position regions
        // around the median index; one representative per region.
        if (n == 1) {
          add_singleton(out, g, c, p, alpha, g.live[0].first,
                        g.live[0].second, 0);
          break;
        }
        std::vector<std::pair<i64, i64>> regions;  // [lo, hi)
        if (n % 2 == 0) {
          i64 m = n / 2;
          regions = {{0, m}, {m, m + 1}, {m + 1, n}};
        } else {
          i64 m = (n - 1) / 2;
          regions = {{0, m}, {m, m + 1}, {m + 1, n}};
        }
        for (const auto& [lo, hi] : regions) {
          if (lo >= hi) continue;
          auto rep = region_representative(g, lo, hi);
          // The representative's own sorted position (lowest id of the top
          // value inside the region) for the closed-form new median.
          i64 j = hi - 1;
          while (j > lo && g.live[j - 1].first == rep.first) --j;
          add_singleton(out, g, c, p, alpha, rep.first, rep.second, j);
        }
        break;
      }
    }
  }
  return out;
}

// True when a is strictly better: higher impact per removed tuple, then
// lowest group index, then highest value, then lowest leading id.
bool better_candidate(const Candidate& a, const Candidate& b) {
  i128 lhs = static_cast<i128>(a.impact.num) * b.impact.den *
             static_cast<i64>(b.ids.size());
  i128 rhs = static_cast<i128>(b.impact.num) * a.impact.den *
             static_cast<i64>(a.ids.size());
  if (lhs != rhs) return lhs > rhs;
  if (a.group_index != b.group_index) return a.group_index < b.group_index;
  if (a.value != b.value) return a.value > b.value;
  return a.ids.front() < b.ids.front();
}

std::vector<GState> build_states(const Relation& trend) {
  std::vector<GState> states;
  states.reserve(trend.group_count());
  for (std::size_t i = 0; i < trend.groups().size(); ++i) {
    const Group& g = trend.groups()[i];
    GState st;
    st.key = g.key;
    st.index = static_cast<i64>(i);
    for (const Tuple& t : g.tuples) st.live.push_back({t.value, t.id});
    std::sort(st.live.begin(), st.live.end());
    for (const Tuple& t : g.tuples) {
      st.sum += t.value;
      ++st.hist[t.value];
    }
    states.push_back(std::move(st));
  }
  return states;
}

void apply_removal(GState& g, const Candidate& cand) {
  std::set<i64> drop(cand.ids.begin(), cand.ids.end());
  std::vector<std::pair<i64, i64>> rest;
  rest.reserve(g.live.size() - cand.ids.size());
  for (const auto& [v, id] : g.live) {
    if (drop.count(id)) {
      g.sum -= v;
      auto it = g.hist.find(v);
      if (--it->second == 0) g.hist.erase(it);
    } else {
      rest.push_back({v, id});
    }
  }
  if (rest.size() != g.live.size() - cand.ids.size()) {
    fail(ErrorCode::CorruptBacktrace, "greedy batch removed unknown ids");
  }
  g.live = std::move(rest);
}

}  // namespace

std::vector<Candidate> candidate_set(const Relation& rel, const Aod& aod,
                                     bool optimized) {
  Relation trend = apply_direction(rel, aod.direction);
  std::vector<GState> states = build_states(trend);
  Chain chain = build_chain(states, aod.alpha);
  if (chain.s_mvi.is_zero()) return {};
  return candidates_for(states, chain, aod.alpha, optimized);
}

RepairResult heur_repair(const Relation& rel, const Aod& aod, bool optimized) {
  auto t0 = std::chrono::steady_clock::now();
  RepairResult result;
  result.algorithm = "heuristic";
  result.before = check_aod(rel, aod);

  Relation trend = apply_direction(rel, aod.direction);
  std::vector<GState> states = build_states(trend);
  std::vector<i64> removed;

  while (true) {
    Chain chain = build_chain(states, aod.alpha);
    if (chain.s_mvi.is_zero()) break;
    std::vector<Candidate> cands =
        candidates_for(states, chain, aod.alpha, optimized);
    if (cands.empty()) {
      fail(ErrorCode::CorruptBacktrace,
           "violated relation produced no removal candidates");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < cands.size(); ++i) {
      if (better_candidate(cands[i], cands[best])) best = i;
    }
    Candidate chosen = std::move(cands[best]);
    apply_removal(states[static_cast<std::size_t>(chosen.group_index)],
                  chosen);
    removed.insert(removed.end(), chosen.ids.begin(), chosen.ids.end());
    RemovalEvent ev;
    ev.group_key = chosen.group_key;
    ev.value = chosen.value;
    ev.ids = chosen.ids;
    ev.impact = chosen.impact;
    result.events.push_back(std::move(ev));
    ++result.rounds;
  }

  std::sort(removed.begin(), removed.end());
  result.removed_ids = removed;
  Relation kept_rel = rel.without(removed);
  result.kept_ids = kept_rel.all_ids();
  result.kept_size = static_cast<i64>(result.kept_ids.size());
  result.after = check_aod(kept_rel, aod);
  result.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return result;
}

}  // namespace aod
