#include "aod/relation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "aod/error.hpp"

namespace aod {

const char* aggregate_name(Aggregate alpha) {
  switch (alpha) {
    case Aggregate::Max: return "max";
    case Aggregate::Min: return "min";
    case Aggregate::Count: return "count";
    case Aggregate::CountDistinct: return "countd";
    case Aggregate::Sum: return "sum";
    case Aggregate::Avg: return "avg";
    case Aggregate::Median: return "median";
  }
  return "unknown";
}

std::optional<Aggregate> parse_aggregate(const std::string& name) {
  if (name == "max") return Aggregate::Max;
  if (name == "min") return Aggregate::Min;
  if (name == "count") return Aggregate::Count;
  if (name == "countd") return Aggregate::CountDistinct;
  if (name == "sum") return Aggregate::Sum;
  if (name == "avg") return Aggregate::Avg;
  if (name == "median") return Aggregate::Median;
  return std::nullopt;
}

const char* direction_name(Direction direction) {
  return direction == Direction::Increasing ? "increasing" : "decreasing";
}

std::optional<Direction> parse_direction(const std::string& name) {
  if (name == "increasing" || name == "inc" || name == "up") {
    return Direction::Increasing;
  }
  if (name == "decreasing" || name == "dec" || name == "down") {
    return Direction::Decreasing;
  }
  return std::nullopt;
}

std::vector<std::int64_t> Group::values() const {
  std::vector<std::int64_t> out;
  out.reserve(tuples.size());
  for (const Tuple& t : tuples) out.push_back(t.value);
  return out;
}

Relation Relation::from_tuples(std::vector<Tuple> tuples) {
  std::map<std::int64_t, Group> by_key;
  std::unordered_set<std::int64_t> seen_ids;
  seen_ids.reserve(tuples.size());
  for (const Tuple& t : tuples) {
    if (!seen_ids.insert(t.id).second) {
      fail(ErrorCode::DuplicateId, "tuple id " + std::to_string(t.id) +
                                       " appears more than once");
    }
    Group& g = by_key[t.group];
    g.key = t.group;
    g.tuples.push_back(t);
  }
  Relation rel;
  rel.groups_.reserve(by_key.size());
  for (auto& [key, group] : by_key) {
    std::sort(group.tuples.begin(), group.tuples.end(),
              [](const Tuple& a, const Tuple& b) { return a.id < b.id; });
    rel.size_ += group.tuples.size();
    rel.groups_.push_back(std::move(group));
  }
  return rel;
}

std::vector<std::int64_t> Relation::all_ids() const {
  std::vector<std::int64_t> ids;
  ids.reserve(size_);
  for (const Group& g : groups_) {
    for (const Tuple& t : g.tuples) ids.push_back(t.id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<Tuple> Relation::all_tuples() const {
  std::vector<Tuple> out;
  out.reserve(size_);
  for (const Group& g : groups_) {
    out.insert(out.end(), g.tuples.begin(), g.tuples.end());
  }
  std::sort(out.begin(), out.end(),
            [](const Tuple& a, const Tuple& b) { return a.id < b.id; });
  return out;
}

Relation Relation::restrict_to(const std::vector<std::int64_t>& kept_ids) const {
  std::unordered_set<std::int64_t> keep(kept_ids.begin(), kept_ids.end());
  Relation out;
  for (const Group& g : groups_) {
    Group ng;
    ng.key = g.key;
    for (const Tuple& t : g.tuples) {
      if (keep.count(t.id)) ng.tuples.push_back(t);
    }
    if (!ng.tuples.empty()) {
      out.size_ += ng.tuples.size();
      out.groups_.push_back(std::move(ng));
    }
  }
  return out;
}

Relation Relation::without(const std::vector<std::int64_t>& removed_ids) const {
  std::unordered_set<std::int64_t> drop(removed_ids.begin(), removed_ids.end());
  Relation out;
  for (const Group& g : groups_) {
    Group ng;
    ng.key = g.key;
    for (const Tuple& t : g.tuples) {
      if (!drop.count(t.id)) ng.tuples.push_back(t);
    }
    if (!ng.tuples.empty()) {
      out.size_ += ng.tuples.size();
      out.groups_.push_back(std::move(ng));
    }
  }
  return out;
}

AggValue evaluate_aggregate(const std::vector<std::int64_t>& values, Aggregate alpha) {
  if (values.empty()) {
    fail(ErrorCode::EmptyBag, "aggregate over an empty bag of values");
  }
  switch (alpha) {
    case Aggregate::Max:
      return AggValue::integer(*std::max_element(values.begin(), values.end()));
    case Aggregate::Min:
      return AggValue::integer(*std::min_element(values.begin(), values.end()));
    case Aggregate::Count:
      return AggValue::count(static_cast<std::int64_t>(values.size()));
    case Aggregate::CountDistinct: {
      std::set<std::int64_t> distinct(values.begin(), values.end());
      return AggValue::count(static_cast<std::int64_t>(distinct.size()));
    }
    case Aggregate::Sum: {
      std::int64_t sum = 0;
      for (std::int64_t v : values) sum += v;
      return AggValue::integer(sum);
    }
    case Aggregate::Avg: {
      std::int64_t sum = 0;
      for (std::int64_t v : values) sum += v;
      return AggValue::ratio(sum, static_cast<std::int64_t>(values.size()));
    }
    case Aggregate::Median: {
      std::vector<std::int64_t> sorted = values;
      std::sort(sorted.begin(), sorted.end());
      std::size_t n = sorted.size();
      if (n % 2 == 1) return AggValue::integer(sorted[n / 2]);
      return AggValue::half(sorted[n / 2 - 1] + sorted[n / 2]);
    }
  }
  fail(ErrorCode::UnsupportedCombination, "unhandled aggregate");
}

Relation Relation::from_groups(std::vector<Group> groups) {
  Relation rel;
  std::unordered_set<std::int64_t> seen_ids;
  for (Group& g : groups) {
    std::sort(g.tuples.begin(), g.tuples.end(),
              [](const Tuple& a, const Tuple& b) { return a.id < b.id; });
    for (const Tuple& t : g.tuples) {
      if (!seen_ids.insert(t.id).second) {
        fail(ErrorCode::DuplicateId, "tuple id " + std::to_string(t.id) +
                                         " appears more than once");
      }
    }
    rel.size_ += g.tuples.size();
  }
  rel.groups_ = std::move(groups);
  return rel;
}

Relation apply_direction(const Relation& rel, Direction direction) {
  if (direction == Direction::Increasing) return rel;
  std::vector<Group> reversed(rel.groups().rbegin(), rel.groups().rend());
  return Relation::from_groups(std::move(reversed));
}

AggValue compute_mvi(const AggValue& left, const AggValue& right) {
  AggValue diff = left - right;
  return diff > AggValue::zero() ? diff : AggValue::zero();
}

ViolationProfile check_aod(const Relation& rel, const Aod& aod) {
  ViolationProfile profile;
  const auto& groups = rel.groups();
  std::vector<const Group*> trend;
  trend.reserve(groups.size());
  if (aod.direction == Direction::Increasing) {
    for (const Group& g : groups) trend.push_back(&g);
  } else {
    for (auto it = groups.rbegin(); it != groups.rend(); ++it) trend.push_back(&*it);
  }
  profile.s_mvi = AggValue::zero();
  for (const Group* g : trend) {
    profile.group_keys.push_back(g->key);
    profile.aggregates.push_back(evaluate_aggregate(g->values(), aod.alpha));
  }
  for (std::size_t i = 0; i + 1 < profile.aggregates.size(); ++i) {
    AggValue m = compute_mvi(profile.aggregates[i], profile.aggregates[i + 1]);
    profile.s_mvi = profile.s_mvi + m;
    profile.mvi.push_back(m);
  }
  profile.satisfied = profile.s_mvi.is_zero();
  return profile;
}

}  // namespace aod
