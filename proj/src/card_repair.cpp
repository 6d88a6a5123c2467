#include "aod/card_repair.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "aod/error.hpp"
#include "aod/heur_repair.hpp"
#include "aod/threads.hpp"

namespace aod {

namespace {

using i64 = std::int64_t;
using i32 = std::int32_t;

// Snapshot of the dictionary taken at a group boundary: for every key, the
// best (max-size, earliest-achiever) chain over all keys <= it.
struct PrefixBest {
  std::vector<AggValue> keys;       // ascending
  std::vector<i32> best_node;       // arena index of the running best
};

PrefixBest snapshot_prefix_best(const SolutionDict& dict) {
  PrefixBest snap;
  snap.keys.reserve(dict.entries.size());
  snap.best_node.reserve(dict.entries.size());
  i64 run_size = -1;
  i32 run_node = -1;
  for (const auto& [key, node] : dict.entries) {
    i64 sz = dict.arena[static_cast<std::size_t>(node)].size;
    if (sz > run_size) {  // strict: ties keep the earlier (smaller-key) chain
      run_size = sz;
      run_node = node;
    }
    snap.keys.push_back(key);
    snap.best_node.push_back(run_node);
  }
  return snap;
}

// Best chain over snapshot keys <= x; -1 when none.
i32 prefix_best_at(const PrefixBest& snap, const AggValue& x) {
  auto it = std::upper_bound(snap.keys.begin(), snap.keys.end(), x);
  if (it == snap.keys.begin()) return -1;
  std::size_t idx = static_cast<std::size_t>(it - snap.keys.begin()) - 1;
  return snap.best_node[idx];
}

std::vector<PackTable> build_tables(const Relation& trend, const Aod& aod,
                                    const RepairOptions& options,
                                    std::optional<i64> h) {
  std::size_t m = trend.groups().size();
  std::vector<PackTable> tables(m);
  int workers = resolve_threads(options.threads);
  if (workers <= 1 || m <= 1) {
    for (std::size_t i = 0; i < m; ++i) {
      tables[i] = build_pack_table(trend.groups()[i], aod.alpha, options.packer,
                                   h, options.check_invariants,
                                   options.allow_naive_fallback);
    }
    return tables;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto work = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= m) return;
      try {
        tables[i] = build_pack_table(trend.groups()[i], aod.alpha,
                                     options.packer, h,
                                     options.check_invariants,
                                     options.allow_naive_fallback);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int count = workers > static_cast<int>(m) ? static_cast<int>(m) : workers;
  pool.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return tables;
}

// Shared chain walk; cache, when given, supplies the tables the sweep built
// (identical sizes at every surviving key to freshly rebuilt ones).
std::vector<i64> walk_chain(const SolutionDict& dict, const AggValue& final_key,
                            const Relation& trend_rel, const Aod& aod,
                            const RepairOptions& options,
                            const std::vector<PackTable>* cache) {
  auto it = dict.entries.find(final_key);
  if (it == dict.entries.end()) {
    fail(ErrorCode::CorruptBacktrace, "final key missing from dictionary");
  }
  std::vector<i64> kept;
  i32 cursor = it->second;
  while (cursor >= 0) {
    const SolutionDict::Node& node =
        dict.arena[static_cast<std::size_t>(cursor)];
    if (node.group < 0 ||
        node.group >= static_cast<i32>(trend_rel.groups().size())) {
      fail(ErrorCode::CorruptBacktrace, "chain group index out of range");
    }
    const Group& g = trend_rel.groups()[static_cast<std::size_t>(node.group)];
    i64 own_size = node.size;
    if (node.parent >= 0) {
      const SolutionDict::Node& par =
          dict.arena[static_cast<std::size_t>(node.parent)];
      if (par.group >= node.group) {
        fail(ErrorCode::CorruptBacktrace, "chain groups not increasing");
      }
      if (node.key < par.key) {
        fail(ErrorCode::CorruptBacktrace, "chain keys decreasing");
      }
      own_size -= par.size;
    }
    std::vector<i64> ids;
    if (cache != nullptr) {
      ids = (*cache)[static_cast<std::size_t>(node.group)].reconstruct(
          node.key);
    } else {
      PackTable table =
          build_pack_table(g, aod.alpha, options.packer, std::nullopt,
                           options.check_invariants,
                           options.allow_naive_fallback);
      ids = table.reconstruct(node.key);
    }
    if (static_cast<i64>(ids.size()) != own_size) {
      fail(ErrorCode::CorruptBacktrace, "chain sizes do not telescope");
    }
    kept.insert(kept.end(), ids.begin(), ids.end());
    cursor = node.parent;
  }
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    fail(ErrorCode::CorruptBacktrace, "chain reused a tuple id");
  }
  return kept;
}

}  // namespace

void prune_dominated(SolutionDict& dict) {
  i64 run_size = -1;
  for (auto it = dict.entries.begin(); it != dict.entries.end();) {
    i64 sz = dict.arena[static_cast<std::size_t>(it->second)].size;
    if (sz > run_size) {
      run_size = sz;
      ++it;
    } else {
      it = dict.entries.erase(it);
    }
  }
}

void prune_by_bound(SolutionDict& dict, i64 h, i64 n_prefix) {
  for (auto it = dict.entries.begin(); it != dict.entries.end();) {
    i64 sz = dict.arena[static_cast<std::size_t>(it->second)].size;
    if (n_prefix - sz > h) {
      it = dict.entries.erase(it);
    } else {
      ++it;
    }
  }
}

std::vector<i64> reconstruct(const SolutionDict& dict, const AggValue& final_key,
                             const Relation& trend_rel, const Aod& aod,
                             const RepairOptions& options) {
  return walk_chain(dict, final_key, trend_rel, aod, options, nullptr);
}

RepairResult card_repair(const Relation& rel, const Aod& aod,
                         const RepairOptions& options) {
  auto t0 = std::chrono::steady_clock::now();
  RepairResult result;
  result.algorithm = "exact";
  result.before = check_aod(rel, aod);

  auto finish = [&](std::vector<i64> kept) {
    std::vector<i64> all = rel.all_ids();
    std::set<i64> kept_set(kept.begin(), kept.end());
    result.kept_ids = std::move(kept);
    result.kept_size = static_cast<i64>(result.kept_ids.size());
    result.removed_ids.clear();
    for (i64 id : all) {
      if (!kept_set.count(id)) result.removed_ids.push_back(id);
    }
    result.after = check_aod(rel.restrict_to(result.kept_ids), aod);
    if (!result.after.satisfied) {
      fail(ErrorCode::CorruptBacktrace,
           "reconstructed repair violates the dependency");
    }
    result.runtime_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    return result;
  };

  if (result.before.satisfied) {
    return finish(rel.all_ids());
  }

  // Resolve the removal bound h before any table is built: the bound shapes
  // both the per-group tables and the dictionary pruning.
  std::optional<i64> h;
  if (options.h_mode == HBoundMode::Heuristic) {
    RepairResult greedy = heur_repair(rel, aod, true);
    h = static_cast<i64>(greedy.removed_ids.size());
    result.heuristic_bound_used = h;
  } else if (options.h_mode == HBoundMode::Explicit) {
    if (options.h_explicit < 0) {
      fail(ErrorCode::InvalidParams, "explicit removal bound must be >= 0");
    }
    h = options.h_explicit;
    result.heuristic_bound_used = h;
  }
  bool bound_prune = options.pruning == DictPruning::Bound ||
                     options.pruning == DictPruning::Both;
  bool dominated_prune = options.pruning == DictPruning::Dominated ||
                         options.pruning == DictPruning::Both;
  if (bound_prune && !h.has_value()) {
    fail(ErrorCode::UnsupportedCombination,
         "bound pruning requires a removal bound");
  }

  Relation trend = apply_direction(rel, aod.direction);
  std::vector<PackTable> tables = build_tables(trend, aod, options, h);

  SolutionDict dict;
  i64 n_prefix = 0;
  i64 peak = 0;
  for (std::size_t gi = 0; gi < trend.groups().size(); ++gi) {
    n_prefix += trend.groups()[gi].size();
    PrefixBest snap = snapshot_prefix_best(dict);
    const auto& entries = tables[gi].entries();
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
      const AggValue& x = it->first;
      i64 own = it->second;
      i32 base = prefix_best_at(snap, x);
      i64 cand = own +
                 (base >= 0 ? dict.arena[static_cast<std::size_t>(base)].size
                            : 0);
      auto slot = dict.entries.find(x);
      if (slot != dict.entries.end() &&
          dict.arena[static_cast<std::size_t>(slot->second)].size >= cand) {
        continue;  // ties keep the existing (earlier) chain
      }
      SolutionDict::Node node;
      node.group = static_cast<i32>(gi);
      node.key = x;
      node.size = cand;
      node.parent = base;
      dict.arena.push_back(node);
      dict.entries[x] = static_cast<i32>(dict.arena.size() - 1);
    }
    if (bound_prune) prune_by_bound(dict, *h, n_prefix);
    if (dominated_prune) prune_dominated(dict);
    peak = std::max(peak, static_cast<i64>(dict.entries.size()));
  }

  if (dict.entries.empty()) {
    fail(ErrorCode::BoundTooTight,
         "no chain survives the removal bound; raise h");
  }

  i64 best_size = -1;
  AggValue best_key;
  for (const auto& [key, node] : dict.entries) {  // strict >: smallest key wins
    i64 sz = dict.arena[static_cast<std::size_t>(node)].size;
    if (sz > best_size) {
      best_size = sz;
      best_key = key;
    }
  }

  result.dict_final_entries = static_cast<i64>(dict.entries.size());
  result.dict_peak_entries = peak;
  result.arena_nodes = static_cast<i64>(dict.arena.size());

  std::vector<i64> kept =
      walk_chain(dict, best_key, trend, aod, options, &tables);
  if (static_cast<i64>(kept.size()) != best_size) {
    fail(ErrorCode::CorruptBacktrace, "chain size mismatch at root");
  }
  return finish(std::move(kept));
}

}  // namespace aod
