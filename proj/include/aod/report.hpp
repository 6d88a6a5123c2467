#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aod/generate.hpp"
#include "aod/relation.hpp"
#include "aod/repair_types.hpp"

namespace aod {

inline constexpr int kReportSchemaVersion = 1;

// Descriptor of where the relation came from, echoed into every report.
struct InputInfo {
  std::string source;        // file path, "generated", or "stdin"
  std::string group_column;
  std::string agg_column;
  std::int64_t tuple_count = 0;  // post-preprocessing
};

// Aggregates as exact strings ("3", "9/2"); s_mvi always as "num/den".
nlohmann::json profile_json(const ViolationProfile& profile);

nlohmann::json check_report(const InputInfo& input, const Aod& aod,
                            const ViolationProfile& profile);

// options_label: human-readable algorithm options (packer/pruning/bound).
// zscore_removed: ids the Z-score prefilter removed, when it ran.
nlohmann::json repair_report(
    const InputInfo& input, const Aod& aod, const std::string& options_label,
    const RepairResult& result,
    const std::optional<std::vector<std::int64_t>>& zscore_removed);

nlohmann::json gen_metadata(const GenParams& params, const GenResult& result);

struct BenchCell {
  std::int64_t size = 0;
  std::string aggregate;
  std::string algorithm;  // "exact" | "heur"
  double median_runtime_ms = 0.0;
  std::vector<double> runtimes_ms;  // one per repetition
  std::int64_t removed_count = 0;
  std::uint64_t seed = 0;
};

nlohmann::json bench_report(const std::vector<BenchCell>& cells,
                            std::int64_t reps, bool parallel);

}  // namespace aod
