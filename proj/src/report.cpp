#include "aod/report.hpp"

#include <map>

namespace aod {

namespace {

using nlohmann::json;

json input_json(const InputInfo& input) {
  return json{{"source", input.source},
              {"group_column", input.group_column},
              {"agg_column", input.agg_column},
              {"tuple_count", input.tuple_count}};
}

json aod_json(const Aod& aod) {
  return json{{"aggregate", aggregate_name(aod.alpha)},
              {"direction", direction_name(aod.direction)}};
}

}  // namespace

json profile_json(const ViolationProfile& profile) {
  json groups = json::array();
  for (std::size_t i = 0; i < profile.group_keys.size(); ++i) {
    groups.push_back(json{{"key", profile.group_keys[i]},
                          {"aggregate", profile.aggregates[i].str()}});
  }
  json mvi = json::array();
  for (const AggValue& v : profile.mvi) mvi.push_back(v.str());
  return json{{"satisfied", profile.satisfied},
              {"groups", groups},
              {"mvi", mvi},
              {"s_mvi", profile.s_mvi.ratio_str()}};
}

json check_report(const InputInfo& input, const Aod& aod,
                  const ViolationProfile& profile) {
  return json{{"schema_version", kReportSchemaVersion},
              {"input", input_json(input)},
              {"aod", aod_json(aod)},
              {"result", profile_json(profile)}};
}

json repair_report(
    const InputInfo& input, const Aod& aod, const std::string& options_label,
    const RepairResult& result,
    const std::optional<std::vector<std::int64_t>>& zscore_removed) {
  // Per-group rows pair the before aggregate with the after aggregate, or
  // "deleted" when every tuple of the group was removed.
  std::map<std::int64_t, std::string> after_by_key;
  for (std::size_t i = 0; i < result.after.group_keys.size(); ++i) {
    after_by_key[result.after.group_keys[i]] = result.after.aggregates[i].str();
  }
  json per_group = json::array();
  for (std::size_t i = 0; i < result.before.group_keys.size(); ++i) {
    std::int64_t key = result.before.group_keys[i];
    auto it = after_by_key.find(key);
    per_group.push_back(
        json{{"key", key},
             {"before", result.before.aggregates[i].str()},
             {"after", it == after_by_key.end() ? std::string("deleted")
                                                : it->second}});
  }

  json report{{"schema_version", kReportSchemaVersion},
              {"input", input_json(input)},
              {"aod", aod_json(aod)},
              {"algorithm", result.algorithm},
              {"options", options_label},
              {"removed_count",
               static_cast<std::int64_t>(result.removed_ids.size())},
              {"removed_ids", result.removed_ids},
              {"kept_count", result.kept_size},
              {"per_group", per_group},
              {"s_mvi_before", result.before.s_mvi.ratio_str()},
              {"s_mvi_after", result.after.s_mvi.ratio_str()},
              {"runtime_ms", result.runtime_ms}};
  if (result.heuristic_bound_used) {
    report["heuristic_bound_used"] = *result.heuristic_bound_used;
  }
  if (zscore_removed) {
    report["zscore_removed_count"] =
        static_cast<std::int64_t>(zscore_removed->size());
    report["zscore_removed_ids"] = *zscore_removed;
  }
  if (!result.events.empty()) {
    json events = json::array();
    for (const RemovalEvent& ev : result.events) {
      events.push_back(json{{"group", ev.group_key},
                            {"value", ev.value},
                            {"ids", ev.ids},
                            {"impact", ev.impact.str()}});
    }
    report["events"] = events;
    report["rounds"] = result.rounds;
  }
  return report;
}

json gen_metadata(const GenParams& params, const GenResult& result) {
  return json{{"schema_version", kReportSchemaVersion},
              // Seeds are full 64-bit words; doubles cannot hold them.
              {"seed", std::to_string(params.seed)},
              {"rows", params.rows},
              {"groups", params.groups},
              {"noise_frac", params.noise_frac},
              {"violating_groups", params.violating_groups},
              {"clean_rows", result.clean_rows},
              {"noise_rows", result.noise_rows},
              {"prng", result.prng},
              {"group_assignment", result.group_assignment}};
}

json bench_report(const std::vector<BenchCell>& cells, std::int64_t reps,
                  bool parallel) {
  json cell_rows = json::array();
  for (const BenchCell& c : cells) {
    cell_rows.push_back(json{{"size", c.size},
                             {"aggregate", c.aggregate},
                             {"algorithm", c.algorithm},
                             {"median_runtime_ms", c.median_runtime_ms},
                             {"runtimes_ms", c.runtimes_ms},
                             {"removed_count", c.removed_count},
                             {"seed", std::to_string(c.seed)}});
  }
  // Plot-ready series: one line per (aggregate, algorithm), x = size.
  std::map<std::string, json> series;
  for (const BenchCell& c : cells) {
    std::string label = c.aggregate + "/" + c.algorithm;
    if (!series.count(label)) {
      series[label] = json{{"label", label}, {"points", json::array()}};
    }
    series[label]["points"].push_back(
        json{{"x", c.size}, {"y_ms", c.median_runtime_ms}});
  }
  json series_rows = json::array();
  for (auto& [label, s] : series) series_rows.push_back(s);
  return json{{"schema_version", kReportSchemaVersion},
              {"repetitions", reps},
              {"parallel", parallel},
              {"cells", cell_rows},
              {"series", series_rows}};
}

}  // namespace aod
