#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aod/value.hpp"

namespace aod {

// A relation as seen by the dependency checker: every tuple carries a unique
// id, an integral group key, and an integral aggregate attribute.  Groups are
// the equivalence classes of the group key, kept in ascending key order, with
// tuples inside a group ordered by id.  Tuples never exist outside a group, so
// deleting every tuple of a group makes the group itself vanish.

enum class Aggregate { Max, Min, Count, CountDistinct, Sum, Avg, Median };
enum class Direction { Increasing, Decreasing };

// One aggregate order dependency over the (implicit) group/value columns:
// "walking the groups in key order, alpha must move with `direction`"
// (non-strictly).
struct Aod {
  Aggregate alpha = Aggregate::Max;
  Direction direction = Direction::Increasing;
};

const char* aggregate_name(Aggregate alpha);
std::optional<Aggregate> parse_aggregate(const std::string& name);
const char* direction_name(Direction direction);
std::optional<Direction> parse_direction(const std::string& name);

struct Tuple {
  std::int64_t id = 0;
  std::int64_t group = 0;
  std::int64_t value = 0;
};

struct Group {
  std::int64_t key = 0;
  std::vector<Tuple> tuples;  // ascending id

  std::size_t size() const { return tuples.size(); }
  std::vector<std::int64_t> values() const;
};

class Relation {
 public:
  Relation() = default;

  // Groups and sorts the tuples; throws DuplicateId on a repeated id.
  static Relation from_tuples(std::vector<Tuple> tuples);

  // Adopts pre-built groups verbatim, preserving their order.  Used to walk a
  // decreasing dependency without losing the original keys.
  static Relation from_groups(std::vector<Group> groups);

  const std::vector<Group>& groups() const { return groups_; }
  std::size_t group_count() const { return groups_.size(); }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  std::vector<std::int64_t> all_ids() const;  // ascending
  std::vector<Tuple> all_tuples() const;      // ascending id

  // The sub-relation induced by the given ids; groups losing every tuple
  // vanish.  Ids absent from the relation are ignored.
  Relation restrict_to(const std::vector<std::int64_t>& kept_ids) const;
  // The sub-relation after deleting the given ids.
  Relation without(const std::vector<std::int64_t>& removed_ids) const;

 private:
  std::vector<Group> groups_;
  std::size_t size_ = 0;
};

// Aggregate of a non-empty bag of values; throws EmptyBag otherwise.
AggValue evaluate_aggregate(const std::vector<std::int64_t>& values, Aggregate alpha);

// Normalizes a dependency to the increasing direction by reversing the group
// order when the dependency is decreasing.  All repair algorithms run on the
// normalized relation, so they only ever reason about "must not decrease".
Relation apply_direction(const Relation& rel, Direction direction);

// Violation measure of one adjacent group pair: how far the right aggregate
// falls below the left one (zero when the pair is ordered).
AggValue compute_mvi(const AggValue& left, const AggValue& right);

// Full scan of a dependency over a relation.  Group data is reported in trend
// order (the normalized walk order): ascending keys for increasing
// dependencies, descending keys for decreasing ones.
struct ViolationProfile {
  std::vector<std::int64_t> group_keys;  // trend order
  std::vector<AggValue> aggregates;      // alpha per group, trend order
  std::vector<AggValue> mvi;             // one per adjacent pair
  AggValue s_mvi;                        // sum of mvi
  bool satisfied = true;
};

ViolationProfile check_aod(const Relation& rel, const Aod& aod);

}  // namespace aod
