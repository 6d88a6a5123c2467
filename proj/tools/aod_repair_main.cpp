// aod-repair: check aggregate order dependencies on CSV tables, repair them
// by tuple deletion (exact or greedy), generate synthetic tables, and bench
// the algorithms.  Exit codes: 0 success/satisfied, 1 dependency violated,
// 2 input error, 3 unsupported option combination.
#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aod/card_repair.hpp"
#include "aod/error.hpp"
#include "aod/generate.hpp"
#include "aod/heur_repair.hpp"
#include "aod/ingest.hpp"
#include "aod/relation.hpp"
#include "aod/report.hpp"
#include "aod/threads.hpp"

namespace {

using aod::AggValue;
using nlohmann::json;

constexpr int kExitSatisfied = 0;
constexpr int kExitViolated = 1;
constexpr int kExitInputError = 2;
constexpr int kExitUnsupported = 3;

// Shared ingest/dependency flags of check and repair.
struct CommonArgs {
  std::string input;
  std::string group_column = "group";
  std::string agg_column = "value";
  std::string agg_name;
  std::string direction_name = "increasing";
  std::string group_bin_width;
  std::string agg_bin_width;
  std::string agg_truncate_cap;
  std::int64_t agg_scale_factor = 1;
  bool lenient = false;
  std::string report_out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--input", args.input, "input CSV file")->required();
  cmd->add_option("--group-column", args.group_column,
                  "name of the group column (default: group)");
  cmd->add_option("--agg-column", args.agg_column,
                  "name of the aggregate column (default: value)");
  cmd->add_option("--agg", args.agg_name,
                  "aggregate: max|min|count|countd|sum|avg|median")
      ->required();
  cmd->add_option("--direction", args.direction_name,
                  "trend direction: increasing|decreasing");
  cmd->add_option("--group-bin-width", args.group_bin_width,
                  "bin the group column: floor(raw/width)");
  cmd->add_option("--agg-bin-width", args.agg_bin_width,
                  "bin the aggregate column: floor(raw/width)");
  cmd->add_option("--agg-truncate-cap", args.agg_truncate_cap,
                  "truncate the aggregate column at this cap first");
  cmd->add_option("--agg-scale-factor", args.agg_scale_factor,
                  "integer scale for decimal aggregates: round(raw*scale)");
  cmd->add_flag("--lenient", args.lenient,
                "skip and count unparsable rows instead of failing");
  cmd->add_option("--report-out", args.report_out,
                  "also write the JSON report to this file");
}

// Parses an optional decimal flag; empty string = not set.
std::optional<AggValue> decimal_flag(const std::string& text,
                                     const char* what) {
  if (text.empty()) return std::nullopt;
  auto v = aod::parse_decimal(text);
  if (!v) {
    aod::fail(aod::ErrorCode::InvalidParams,
              std::string(what) + " is not a decimal number: '" + text + "'");
  }
  return v;
}

aod::IngestConfig ingest_config(const CommonArgs& args) {
  aod::IngestConfig cfg;
  cfg.group_column = args.group_column;
  cfg.agg_column = args.agg_column;
  cfg.group_bin_width = decimal_flag(args.group_bin_width, "--group-bin-width");
  cfg.agg_bin_width = decimal_flag(args.agg_bin_width, "--agg-bin-width");
  cfg.agg_truncate_cap =
      decimal_flag(args.agg_truncate_cap, "--agg-truncate-cap");
  cfg.agg_scale_factor = args.agg_scale_factor;
  cfg.lenient = args.lenient;
  return cfg;
}

// Enum-name errors are "unsupported combination", not input errors.
struct UnsupportedFlag {
  std::string message;
};

aod::Aod parse_aod_args(const CommonArgs& args) {
  aod::Aod aod;
  auto alpha = aod::parse_aggregate(args.agg_name);
  if (!alpha) {
    throw UnsupportedFlag{"unknown aggregate '" + args.agg_name + "'"};
  }
  auto dir = aod::parse_direction(args.direction_name);
  if (!dir) {
    throw UnsupportedFlag{"unknown direction '" + args.direction_name + "'"};
  }
  aod.alpha = *alpha;
  aod.direction = *dir;
  return aod;
}

void emit_report(const json& report, const std::string& path) {
  std::cout << report.dump(2) << "\n";
  if (!path.empty()) {
    std::ofstream out(path);
    if (!out) {
      aod::fail(aod::ErrorCode::ParseError,
                "cannot open report file: " + path);
    }
    out << report.dump(2) << "\n";
  }
}

int cmd_check(const CommonArgs& args) {
  aod::Aod aod = parse_aod_args(args);
  aod::LoadResult loaded = aod::load_csv(args.input, ingest_config(args));
  aod::ViolationProfile profile = aod::check_aod(loaded.relation, aod);
  aod::InputInfo input{args.input, args.group_column, args.agg_column,
                       static_cast<std::int64_t>(loaded.relation.size())};
  emit_report(aod::check_report(input, aod, profile), args.report_out);
  return profile.satisfied ? kExitSatisfied : kExitViolated;
}

struct RepairArgs {
  CommonArgs common;
  std::string algo = "heur";
  std::string packer = "optimized";
  std::string prune = "none";
  std::int64_t bound = -1;
  int threads = 1;
  std::string zscore_tau;
  std::string zscore_scope = "global";
  std::string removed_out;
};

int cmd_repair(const RepairArgs& args) {
  aod::Aod aod = parse_aod_args(args.common);
  if (args.algo != "exact" && args.algo != "heur") {
    throw UnsupportedFlag{"unknown algorithm '" + args.algo + "'"};
  }

  aod::RepairOptions options;
  if (args.packer == "naive") {
    options.packer = aod::PackerKind::Naive;
  } else if (args.packer == "optimized") {
    options.packer = aod::PackerKind::Optimized;
  } else {
    throw UnsupportedFlag{"unknown packer '" + args.packer + "'"};
  }
  if (args.prune == "none") {
    options.h_mode = aod::HBoundMode::None;
    options.pruning = aod::DictPruning::None;
  } else if (args.prune == "heur") {
    options.h_mode = aod::HBoundMode::Heuristic;
    options.pruning = aod::DictPruning::Bound;
  } else if (args.prune == "dominated") {
    options.h_mode = aod::HBoundMode::None;
    options.pruning = aod::DictPruning::Dominated;
  } else if (args.prune == "both") {
    options.h_mode = aod::HBoundMode::Heuristic;
    options.pruning = aod::DictPruning::Both;
  } else {
    throw UnsupportedFlag{"unknown prune mode '" + args.prune + "'"};
  }
  if (args.bound >= 0) {
    options.h_mode = aod::HBoundMode::Explicit;
    options.h_explicit = args.bound;
    if (options.pruning == aod::DictPruning::None) {
      options.pruning = aod::DictPruning::Bound;
    } else if (options.pruning == aod::DictPruning::Dominated) {
      options.pruning = aod::DictPruning::Both;
    }
  }
  options.threads = args.threads;

  std::optional<aod::ZScoreConfig> zscore;
  if (!args.zscore_tau.empty()) {
    aod::ZScoreConfig z;
    auto tau = aod::parse_decimal(args.zscore_tau);
    if (!tau) {
      aod::fail(aod::ErrorCode::InvalidParams,
                "--zscore-tau is not a decimal number: '" + args.zscore_tau +
                    "'");
    }
    z.tau = *tau;
    if (args.zscore_scope == "global") {
      z.scope = aod::ZScope::Global;
    } else if (args.zscore_scope == "per_group") {
      z.scope = aod::ZScope::PerGroup;
    } else {
      throw UnsupportedFlag{"unknown zscore scope '" + args.zscore_scope +
                            "'"};
    }
    zscore = z;
  }

  aod::LoadResult loaded = aod::load_csv(args.common.input,
                                         ingest_config(args.common));
  aod::Relation working = loaded.relation;
  std::optional<std::vector<std::int64_t>> zscore_removed;
  if (zscore) {
    aod::ZScoreResult z = aod::zscore_filter(working, zscore->tau,
                                             zscore->scope);
    working = z.relation;
    zscore_removed = z.removed_ids;
  }

  aod::RepairResult result = args.algo == "exact"
                                 ? aod::card_repair(working, aod, options)
                                 : aod::heur_repair(working, aod, true);

  std::string label = args.algo == "exact"
                          ? "packer=" + args.packer + " prune=" + args.prune +
                                (args.bound >= 0
                                     ? " bound=" + std::to_string(args.bound)
                                     : "")
                          : "optimized greedy";
  aod::InputInfo input{args.common.input, args.common.group_column,
                       args.common.agg_column,
                       static_cast<std::int64_t>(working.size())};
  emit_report(aod::repair_report(input, aod, label, result, zscore_removed),
              args.common.report_out);

  if (!args.removed_out.empty()) {
    std::ofstream out(args.removed_out);
    if (!out) {
      aod::fail(aod::ErrorCode::ParseError,
                "cannot open removed-rows file: " + args.removed_out);
    }
    out << loaded.raw_header << "\n";
    std::vector<std::int64_t> all_removed;
    if (zscore_removed) all_removed = *zscore_removed;
    all_removed.insert(all_removed.end(), result.removed_ids.begin(),
                       result.removed_ids.end());
    std::sort(all_removed.begin(), all_removed.end());
    for (std::int64_t id : all_removed) {
      out << loaded.raw_rows[static_cast<std::size_t>(id)] << "\n";
    }
  }
  return kExitSatisfied;
}

struct GenArgs {
  std::int64_t rows = 0;
  std::int64_t groups = 10;
  double noise_frac = 0.0;
  std::int64_t violating_groups = 4;
  std::uint64_t seed = 0;
  std::string out;
  std::string metadata_out;
};

int cmd_gen(const GenArgs& args) {
  aod::GenParams params;
  params.rows = args.rows;
  params.groups = args.groups;
  params.noise_frac = args.noise_frac;
  params.violating_groups = args.violating_groups;
  params.seed = args.seed;
  aod::GenResult result = aod::generate(params);
  aod::write_csv(result.relation, args.out);
  emit_report(aod::gen_metadata(params, result), args.metadata_out);
  return kExitSatisfied;
}

struct BenchArgs {
  std::vector<std::int64_t> sizes;
  std::vector<std::string> aggs;
  std::vector<std::string> algos = {"exact", "heur"};
  std::int64_t reps = 3;
  double noise_frac = 0.1;
  std::int64_t groups = 10;
  std::int64_t violating_groups = 4;
  std::uint64_t seed = 42;
  std::string packer = "optimized";
  std::string prune = "heur";
  bool parallel = false;
  std::string report_out;
};

int cmd_bench(const BenchArgs& args) {
  if (args.sizes.empty() || args.aggs.empty() || args.algos.empty() ||
      args.reps < 1) {
    aod::fail(aod::ErrorCode::InvalidParams,
              "bench needs --sizes, --aggs, --algos, and --reps >= 1");
  }
  aod::RepairOptions options;
  if (args.packer == "naive") {
    options.packer = aod::PackerKind::Naive;
  } else if (args.packer == "optimized") {
    options.packer = aod::PackerKind::Optimized;
  } else {
    throw UnsupportedFlag{"unknown packer '" + args.packer + "'"};
  }
  if (args.prune == "none") {
    options.h_mode = aod::HBoundMode::None;
    options.pruning = aod::DictPruning::None;
  } else if (args.prune == "heur") {
    options.h_mode = aod::HBoundMode::Heuristic;
    options.pruning = aod::DictPruning::Bound;
  } else if (args.prune == "dominated") {
    options.h_mode = aod::HBoundMode::None;
    options.pruning = aod::DictPruning::Dominated;
  } else if (args.prune == "both") {
    options.h_mode = aod::HBoundMode::Heuristic;
    options.pruning = aod::DictPruning::Both;
  } else {
    throw UnsupportedFlag{"unknown prune mode '" + args.prune + "'"};
  }

  std::vector<aod::Aod> aods;
  for (const std::string& name : args.aggs) {
    auto alpha = aod::parse_aggregate(name);
    if (!alpha) throw UnsupportedFlag{"unknown aggregate '" + name + "'"};
    aods.push_back(aod::Aod{*alpha, aod::Direction::Increasing});
  }
  for (const std::string& algo : args.algos) {
    if (algo != "exact" && algo != "heur") {
      throw UnsupportedFlag{"unknown algorithm '" + algo + "'"};
    }
  }

  std::vector<aod::BenchCell> cells;
  for (std::size_t si = 0; si < args.sizes.size(); ++si) {
    aod::GenParams params;
    params.rows = args.sizes[si];
    params.groups = args.groups;
    params.noise_frac = args.noise_frac;
    params.violating_groups = args.violating_groups;
    params.seed = args.seed + si;  // same data for every algorithm column
    aod::GenResult gen = aod::generate(params);

    for (std::size_t ai = 0; ai < aods.size(); ++ai) {
      for (const std::string& algo : args.algos) {
        auto run_once = [&]() -> aod::RepairResult {
          return algo == "exact"
                     ? aod::card_repair(gen.relation, aods[ai], options)
                     : aod::heur_repair(gen.relation, aods[ai], true);
        };
        std::vector<double> times(static_cast<std::size_t>(args.reps), 0.0);
        std::int64_t removed = 0;
        if (args.parallel) {
          int workers = aod::resolve_threads(static_cast<int>(args.reps));
          std::vector<std::thread> pool;
          std::vector<aod::RepairResult> results(
              static_cast<std::size_t>(args.reps));
          std::atomic<std::int64_t> next{0};
          for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
              while (true) {
                std::int64_t r = next.fetch_add(1);
                if (r >= args.reps) return;
                results[static_cast<std::size_t>(r)] = run_once();
              }
            });
          }
          for (auto& th : pool) th.join();
          for (std::int64_t r = 0; r < args.reps; ++r) {
            times[static_cast<std::size_t>(r)] =
                results[static_cast<std::size_t>(r)].runtime_ms;
          }
          removed = static_cast<std::int64_t>(results[0].removed_ids.size());
        } else {
          for (std::int64_t r = 0; r < args.reps; ++r) {
            aod::RepairResult res = run_once();
            times[static_cast<std::size_t>(r)] = res.runtime_ms;
            removed = static_cast<std::int64_t>(res.removed_ids.size());
          }
        }
        std::vector<double> sorted = times;
        std::sort(sorted.begin(), sorted.end());
        aod::BenchCell cell;
        cell.size = args.sizes[si];
        cell.aggregate = aod::aggregate_name(aods[ai].alpha);
        cell.algorithm = algo;
        cell.median_runtime_ms = sorted[sorted.size() / 2];
        cell.runtimes_ms = times;
        cell.removed_count = removed;
        cell.seed = params.seed;
        cells.push_back(cell);
      }
    }
  }
  emit_report(aod::bench_report(cells, args.reps, args.parallel),
              args.report_out);
  return kExitSatisfied;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "aod-repair: aggregate order dependency checking and tuple-deletion "
      "repair"};
  app.require_subcommand(1);

  CommonArgs check_args;
  CLI::App* check = app.add_subcommand(
      "check", "test whether a dependency holds on a CSV table");
  add_common(check, check_args);

  RepairArgs repair_args;
  CLI::App* repair = app.add_subcommand(
      "repair", "compute a tuple-deletion repair of a violated dependency");
  add_common(repair, repair_args.common);
  repair->add_option("--algo", repair_args.algo,
                     "repair algorithm: exact|heur (default: heur)");
  repair->add_option("--packer", repair_args.packer,
                     "exact packer: naive|optimized");
  repair->add_option("--prune", repair_args.prune,
                     "exact pruning: none|heur|dominated|both");
  repair->add_option("--bound", repair_args.bound,
                     "explicit removal bound for the exact repair");
  repair->add_option("--threads", repair_args.threads,
                     "worker threads for per-group packing");
  repair->add_option("--zscore-tau", repair_args.zscore_tau,
                     "prefilter: remove |value-mean| > tau*std first");
  repair->add_option("--zscore-scope", repair_args.zscore_scope,
                     "zscore statistics scope: global|per_group");
  repair->add_option("--removed-out", repair_args.removed_out,
                     "write the removed original rows to this CSV file");

  GenArgs gen_args;
  CLI::App* gen =
      app.add_subcommand("gen", "generate a synthetic group/value table");
  gen->add_option("--rows", gen_args.rows, "tuple count")->required();
  gen->add_option("--groups", gen_args.groups, "group count (default: 10)");
  gen->add_option("--noise-frac", gen_args.noise_frac,
                  "fraction of noise tuples in [0,1]");
  gen->add_option("--violating-groups", gen_args.violating_groups,
                  "groups receiving noise (default: 4)");
  gen->add_option("--seed", gen_args.seed, "PRNG seed");
  gen->add_option("--out", gen_args.out, "output CSV file")->required();
  gen->add_option("--metadata-out", gen_args.metadata_out,
                  "also write generation metadata JSON to this file");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand(
      "bench", "time the algorithms on generated tables (JSON results)");
  bench->add_option("--sizes", bench_args.sizes, "tuple counts to run")
      ->delimiter(',')
      ->required();
  bench->add_option("--aggs", bench_args.aggs, "aggregates to run")
      ->delimiter(',')
      ->required();
  bench->add_option("--algos", bench_args.algos,
                    "algorithms: exact,heur (default both)")
      ->delimiter(',');
  bench->add_option("--reps", bench_args.reps,
                    "repetitions per cell (median reported)");
  bench->add_option("--noise-frac", bench_args.noise_frac,
                    "generator noise fraction (default 0.1)");
  bench->add_option("--groups", bench_args.groups, "generator group count");
  bench->add_option("--violating-groups", bench_args.violating_groups,
                    "generator violating-group count");
  bench->add_option("--seed", bench_args.seed, "base data seed");
  bench->add_option("--packer", bench_args.packer,
                    "exact packer: naive|optimized");
  bench->add_option("--prune", bench_args.prune,
                    "exact pruning (default: heur)");
  bench->add_flag("--parallel", bench_args.parallel,
                  "run repetitions in parallel (flagged in the report)");
  bench->add_option("--report-out", bench_args.report_out,
                    "also write the JSON report to this file");

  try {
    app.parse(argc, argv);
    if (check->parsed()) return cmd_check(check_args);
    if (repair->parsed()) return cmd_repair(repair_args);
    if (gen->parsed()) return cmd_gen(gen_args);
    if (bench->parsed()) return cmd_bench(bench_args);
    return kExitInputError;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInputError;
  } catch (const UnsupportedFlag& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitUnsupported;
  } catch (const aod::Error& e) {
    std::cerr << "error [" << aod::error_code_name(e.code()) << "]: "
              << e.what() << "\n";
    return e.code() == aod::ErrorCode::UnsupportedCombination
               ? kExitUnsupported
               : kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
