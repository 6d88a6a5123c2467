#include <doctest.h>

#include <algorithm>

#include "aod/error.hpp"
#include "aod/relation.hpp"
#include "helpers.hpp"

using namespace testutil;

TEST_SUITE("relation") {

TEST_CASE("grouping sorts keys ascending and tuples by id") {
  Relation rel = make_rel({{3, 1}, {1, 2}, {3, 4}, {1, 5}});
  REQUIRE(rel.group_count() == 2);
  CHECK(rel.groups()[0].key == 1);
  CHECK(rel.groups()[1].key == 3);
  CHECK(rel.groups()[0].tuples[0].id == 1);
  CHECK(rel.groups()[0].tuples[1].id == 3);
  CHECK(rel.size() == 4);
  CHECK(rel.all_ids() == std::vector<i64>{0, 1, 2, 3});
}

TEST_CASE("duplicate ids are rejected") {
  std::vector<Tuple> tuples = {Tuple{0, 1, 1}, Tuple{0, 2, 2}};
  CHECK_THROWS_AS(Relation::from_tuples(tuples), aod::Error);
}

TEST_CASE("restrict_to and without drop tuples; empty groups vanish") {
  Relation rel = make_rel({{1, 1}, {1, 2}, {2, 3}});
  Relation r1 = rel.restrict_to({0, 1});
  CHECK(r1.group_count() == 1);
  CHECK(r1.size() == 2);
  Relation r2 = rel.without({2});
  CHECK(r2.group_count() == 1);
  Relation r3 = rel.without({});
  CHECK(r3.size() == 3);
  CHECK(rel.restrict_to({}).empty());
}

TEST_CASE("evaluate_aggregate matches the definitions") {
  std::vector<i64> bag = {2, 5, 6, 5, 2};
  CHECK(aod::evaluate_aggregate(bag, Aggregate::Max) == AggValue::integer(6));
  CHECK(aod::evaluate_aggregate(bag, Aggregate::Min) == AggValue::integer(2));
  CHECK(aod::evaluate_aggregate(bag, Aggregate::Count) ==
        AggValue::integer(5));
  CHECK(aod::evaluate_aggregate(bag, Aggregate::CountDistinct) ==
        AggValue::integer(3));
  CHECK(aod::evaluate_aggregate(bag, Aggregate::Sum) == AggValue::integer(20));
  CHECK(aod::evaluate_aggregate(bag, Aggregate::Avg) == AggValue::integer(4));
  CHECK(aod::evaluate_aggregate(bag, Aggregate::Median) ==
        AggValue::integer(5));
  CHECK(aod::evaluate_aggregate({1, 2}, Aggregate::Median) ==
        AggValue::ratio(3, 2));
  CHECK_THROWS_AS(aod::evaluate_aggregate({}, Aggregate::Max), aod::Error);
}

TEST_CASE("golden income table: per-group sums and averages") {
  Relation rel = make_rel(table1_rows());
  REQUIRE(rel.group_count() == 3);
  auto sum_profile = aod::check_aod(rel, Aod{Aggregate::Sum,
                                             Direction::Increasing});
  CHECK(sum_profile.aggregates[0] == AggValue::integer(3));
  CHECK(sum_profile.aggregates[1] == AggValue::integer(20));
  CHECK(sum_profile.aggregates[2] == AggValue::integer(21));
  CHECK(sum_profile.satisfied);
  CHECK(sum_profile.s_mvi.is_zero());

  auto avg_profile = aod::check_aod(rel, Aod{Aggregate::Avg,
                                             Direction::Increasing});
  CHECK(avg_profile.aggregates[0] == AggValue::ratio(3, 2));
  CHECK(avg_profile.aggregates[1] == AggValue::integer(4));
  CHECK(avg_profile.aggregates[2] == AggValue::integer(3));
  CHECK_FALSE(avg_profile.satisfied);
  CHECK(avg_profile.s_mvi == AggValue::integer(1));
  CHECK(avg_profile.s_mvi.ratio_str() == "1/1");
  REQUIRE(avg_profile.mvi.size() == 2);
  CHECK(avg_profile.mvi[0].is_zero());
  CHECK(avg_profile.mvi[1] == AggValue::integer(1));
}

TEST_CASE("compute_mvi is the one-sided gap") {
  CHECK(aod::compute_mvi(AggValue::integer(4), AggValue::integer(2)) ==
        AggValue::integer(2));
  CHECK(aod::compute_mvi(AggValue::integer(2), AggValue::integer(4)).is_zero());
  CHECK(aod::compute_mvi(AggValue::integer(4), AggValue::integer(4)).is_zero());
  CHECK(aod::compute_mvi(AggValue::ratio(7, 2), AggValue::integer(3)) ==
        AggValue::ratio(1, 2));
}

TEST_CASE("decreasing direction walks groups in reverse") {
  // Values rise with the key: increasing holds, decreasing is violated.
  Relation rel = make_rel({{1, 1}, {2, 2}, {3, 3}});
  Aod inc{Aggregate::Max, Direction::Increasing};
  Aod dec{Aggregate::Max, Direction::Decreasing};
  CHECK(aod::check_aod(rel, inc).satisfied);
  CHECK_FALSE(aod::check_aod(rel, dec).satisfied);
  auto prof = aod::check_aod(rel, dec);
  CHECK(prof.group_keys == std::vector<i64>{3, 2, 1});

  // Mirroring the keys turns a decreasing violation into the increasing one.
  Relation mirrored = make_rel({{-1, 1}, {-2, 2}, {-3, 3}});
  CHECK(aod::check_aod(mirrored, dec).satisfied);
}

TEST_CASE("apply_direction reverses group order exactly once") {
  Relation rel = make_rel({{1, 5}, {2, 6}, {3, 7}});
  Relation rev = aod::apply_direction(rel, Direction::Decreasing);
  REQUIRE(rev.group_count() == 3);
  CHECK(rev.groups()[0].key == 3);
  CHECK(rev.groups()[2].key == 1);
  Relation same = aod::apply_direction(rel, Direction::Increasing);
  CHECK(same.groups()[0].key == 1);
}

TEST_CASE("single group or empty relation always satisfies") {
  Relation one = make_rel({{5, 1}, {5, 9}});
  for (Aggregate alpha : all_aggregates()) {
    CHECK(aod::check_aod(one, Aod{alpha, Direction::Increasing}).satisfied);
  }
  Relation empty;
  CHECK(aod::check_aod(empty, Aod{Aggregate::Sum, Direction::Increasing})
            .satisfied);
}

TEST_CASE("vanished groups drop out of the trend walk") {
  // Middle group removed: the remaining pair must be compared directly.
  Relation rel = make_rel({{1, 2}, {2, 9}, {3, 3}});
  Aod aod{Aggregate::Max, Direction::Increasing};
  CHECK_FALSE(aod::check_aod(rel, aod).satisfied);
  CHECK(aod::check_aod(rel.without({1}), aod).satisfied);
}

TEST_CASE("name parsing accepts the CLI vocabulary") {
  CHECK(aod::parse_aggregate("countd") == Aggregate::CountDistinct);
  CHECK(aod::parse_aggregate("median") == Aggregate::Median);
  CHECK_FALSE(aod::parse_aggregate("mode").has_value());
  CHECK(aod::parse_direction("increasing") == Direction::Increasing);
  CHECK(aod::parse_direction("decreasing") == Direction::Decreasing);
  CHECK_FALSE(aod::parse_direction("sideways").has_value());
  for (Aggregate alpha : all_aggregates()) {
    CHECK(aod::parse_aggregate(aod::aggregate_name(alpha)) == alpha);
  }
}

}  // TEST_SUITE
