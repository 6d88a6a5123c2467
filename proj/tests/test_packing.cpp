#include <doctest.h>

#include <algorithm>
#include <random>

#include "aod/error.hpp"
#include "aod/packing.hpp"
#include "helpers.hpp"

using namespace testutil;
using aod::PackerKind;
using aod::PackTable;

namespace {

// Every (key -> size) pair matches, both directions.
void check_same_entries(const PackTable& got,
                        const std::map<AggValue, i64>& want,
                        const char* label) {
  INFO(label);
  REQUIRE(got.entries().size() == want.size());
  for (const auto& [key, size] : want) {
    INFO("key " << key.str());
    REQUIRE(got.contains(key));
    CHECK(got.size_at(key) == size);
  }
}

void check_tables_equal(const PackTable& a, const PackTable& b,
                        const char* label) {
  INFO(label);
  REQUIRE(a.entries().size() == b.entries().size());
  for (const auto& [key, size] : a.entries()) {
    INFO("key " << key.str());
    REQUIRE(b.contains(key));
    CHECK(b.size_at(key) == size);
  }
}

// Reconstruction of every entry must reproduce its size and attain its key.
void check_reconstruction(const aod::Group& g, const PackTable& table,
                          Aggregate alpha) {
  for (const auto& [key, size] : table.entries()) {
    INFO("key " << key.str());
    std::vector<i64> ids = table.reconstruct(key);
    REQUIRE(static_cast<i64>(ids.size()) == size);
    std::vector<i64> values;
    for (i64 id : ids) {
      auto it = std::find_if(g.tuples.begin(), g.tuples.end(),
                             [&](const Tuple& t) { return t.id == id; });
      REQUIRE(it != g.tuples.end());
      values.push_back(it->value);
    }
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    CHECK(ref_aggregate(values, alpha) == key);
  }
}

aod::Group random_group(std::mt19937_64& rng, i64 max_n, i64 lo, i64 hi) {
  i64 n = draw(rng, 1, max_n);
  std::vector<i64> values;
  for (i64 i = 0; i < n; ++i) values.push_back(draw(rng, lo, hi));
  return make_group(0, values);
}

}  // namespace

TEST_SUITE("packing") {

TEST_CASE("single-value packers agree with enumeration on small groups") {
  std::mt19937_64 rng(101);
  for (int iter = 0; iter < 60; ++iter) {
    aod::Group g = random_group(rng, 8, 1, 6);
    for (Aggregate alpha : all_aggregates()) {
      auto want = enum_pack_sizes(g, alpha);
      for (const auto& [key, size] : want) {
        std::vector<i64> ids;
        switch (alpha) {
          case Aggregate::Max: ids = aod::pack_max(g, key); break;
          case Aggregate::Min: ids = aod::pack_min(g, key); break;
          case Aggregate::Count: ids = aod::pack_count(g, key); break;
          case Aggregate::CountDistinct: ids = aod::pack_countd(g, key); break;
          case Aggregate::Median: ids = aod::pack_median_naive(g, key); break;
          default: continue;  // sum/avg have no single-value packer
        }
        INFO(aod::aggregate_name(alpha) << " key " << key.str());
        CHECK(static_cast<i64>(ids.size()) == size);
        std::vector<i64> values;
        for (i64 id : ids) values.push_back(g.tuples[id].value);
        CHECK(ref_aggregate(values, alpha) == key);
      }
    }
  }
}

TEST_CASE("whole tables equal enumeration for every aggregate") {
  std::mt19937_64 rng(202);
  for (int iter = 0; iter < 40; ++iter) {
    aod::Group g = random_group(rng, 10, 1, 6);
    for (Aggregate alpha : all_aggregates()) {
      auto want = enum_pack_sizes(g, alpha);
      for (PackerKind kind : {PackerKind::Naive, PackerKind::Optimized}) {
        PackTable table =
            aod::build_pack_table(g, alpha, kind, std::nullopt);
        check_same_entries(table, want, aod::aggregate_name(alpha));
        check_reconstruction(g, table, alpha);
      }
    }
  }
}

TEST_CASE("naive DPs handle non-positive values; optimized sum falls back") {
  std::mt19937_64 rng(303);
  for (int iter = 0; iter < 25; ++iter) {
    aod::Group g = random_group(rng, 9, -4, 5);
    for (Aggregate alpha : {Aggregate::Sum, Aggregate::Avg}) {
      auto want = enum_pack_sizes(g, alpha);
      PackTable naive =
          aod::build_pack_table(g, alpha, PackerKind::Naive, std::nullopt);
      check_same_entries(naive, want, "naive non-positive");
      check_reconstruction(g, naive, alpha);
      PackTable opt = aod::build_pack_table(g, alpha, PackerKind::Optimized,
                                            std::nullopt);
      check_same_entries(opt, want, "optimized with fallback");
      check_tables_equal(naive, opt, "fallback equals the naive table");
    }
  }
  // Fallback disabled: the optimized sum packer refuses non-positive input.
  aod::Group bad = make_group(0, {3, 0, 2});
  CHECK_THROWS_AS(aod::build_pack_table(bad, Aggregate::Sum,
                                        PackerKind::Optimized, std::nullopt,
                                        false, false),
                  aod::Error);
  CHECK_THROWS_AS(aod::wholepack_sum(bad), aod::Error);
}

TEST_CASE("golden sum trace on [2,2,5,5,6]") {
  aod::Group g = make_group(0, {2, 2, 5, 5, 6});
  aod::SumDpTrace trace = aod::wholepack_sum_trace(g, true);
  REQUIRE(trace.final_m.size() == 21);  // sums 0..20
  CHECK(trace.final_m[9] == 3);
  CHECK(trace.final_m[10] == 3);
  CHECK(trace.final_m[16] == 3);
  CHECK(trace.final_m[20] == 5);
  CHECK(trace.final_m[1] == -1);  // infeasible
  CHECK(trace.invariant_violations == 0);
  std::vector<std::int32_t> frozen = {0,  -1, 1,  -1, 2, 1,  1, 2,  2, 3, 3,
                                      2,  3,  3,  4,  4, 3,  -1, 4, -1, 5};
  CHECK(trace.final_m == frozen);
  REQUIRE(trace.hist.size() == 3);
  CHECK(trace.hist[0] == std::pair<i64, i64>{2, 2});
  CHECK(trace.hist[1] == std::pair<i64, i64>{5, 2});
  CHECK(trace.hist[2] == std::pair<i64, i64>{6, 1});
}

TEST_CASE("median table goldens") {
  // Corrected include-pivot packing: these are the true optima.
  aod::Group g1 = make_group(0, {2, 2, 5, 5, 6});
  CHECK(aod::wholepack_median(g1, std::nullopt).size_at(AggValue::integer(5)) ==
        5);
  aod::Group g2 = make_group(0, {1, 1, 2, 2, 3, 4, 8});
  PackTable t2 = aod::wholepack_median(g2, std::nullopt);
  CHECK(t2.size_at(AggValue::integer(3)) == 5);
  CHECK(t2.size_at(AggValue::integer(2)) == 7);
  aod::Group g3 = make_group(0, {5, 5, 8});
  CHECK(aod::wholepack_median(g3, std::nullopt).size_at(AggValue::integer(5)) ==
        3);
}

TEST_CASE("lemma invariant holds on random positive bags") {
  std::mt19937_64 rng(404);
  for (int iter = 0; iter < 50; ++iter) {
    aod::Group g = random_group(rng, 12, 1, 9);
    aod::SumDpTrace trace = aod::wholepack_sum_trace(g, true);
    CHECK(trace.invariant_violations == 0);
    // And the checked build path does not throw.
    CHECK_NOTHROW(aod::wholepack_sum(g, true));
  }
}

TEST_CASE("removal bound filters tables to large entries only") {
  std::mt19937_64 rng(505);
  for (int iter = 0; iter < 30; ++iter) {
    aod::Group g = random_group(rng, 9, 1, 6);
    i64 n = static_cast<i64>(g.tuples.size());
    for (Aggregate alpha : all_aggregates()) {
      for (PackerKind kind : {PackerKind::Naive, PackerKind::Optimized}) {
        PackTable full = aod::build_pack_table(g, alpha, kind, std::nullopt);
        for (i64 h : {i64{0}, i64{1}, i64{2}, n}) {
          PackTable bounded = aod::build_pack_table(g, alpha, kind, h);
          INFO(aod::aggregate_name(alpha) << " h=" << h);
          // Exactly the full entries of size >= n - h.
          i64 expected = 0;
          for (const auto& [key, size] : full.entries()) {
            if (size >= n - h) {
              ++expected;
              REQUIRE(bounded.contains(key));
              CHECK(bounded.size_at(key) == size);
            } else {
              CHECK_FALSE(bounded.contains(key));
            }
          }
          CHECK(static_cast<i64>(bounded.entries().size()) == expected);
          check_reconstruction(g, bounded, alpha);
        }
      }
    }
  }
}

TEST_CASE("bounded removal tables equal the filtered unbounded tables") {
  std::mt19937_64 rng(606);
  for (int iter = 0; iter < 30; ++iter) {
    aod::Group g = random_group(rng, 9, -3, 6);
    i64 n = static_cast<i64>(g.tuples.size());
    for (Aggregate alpha : {Aggregate::Sum, Aggregate::Avg}) {
      PackTable full =
          aod::build_pack_table(g, alpha, PackerKind::Naive, std::nullopt);
      for (i64 h : {i64{0}, i64{1}, i64{3}, n}) {
        PackTable bounded = aod::bounded_removal_tables(g, alpha, h);
        INFO(aod::aggregate_name(alpha) << " h=" << h);
        i64 expected = 0;
        for (const auto& [key, size] : full.entries()) {
          if (size >= n - h) {
            ++expected;
            REQUIRE(bounded.contains(key));
            CHECK(bounded.size_at(key) == size);
          }
        }
        CHECK(static_cast<i64>(bounded.entries().size()) == expected);
        check_reconstruction(g, bounded, alpha);
      }
    }
  }
  // Aggregates without a removal-space formulation are rejected.
  aod::Group g = make_group(0, {1, 2, 3});
  CHECK_THROWS_AS(aod::bounded_removal_tables(g, Aggregate::Max, 1),
                  aod::Error);
  CHECK_THROWS_AS(aod::bounded_removal_tables(g, Aggregate::Sum, -1),
                  aod::Error);
}

TEST_CASE("table lookups raise on unattainable keys") {
  aod::Group g = make_group(0, {2, 2, 5});
  PackTable table =
      aod::build_pack_table(g, Aggregate::Sum, PackerKind::Optimized,
                            std::nullopt);
  CHECK_THROWS_AS(table.size_at(AggValue::integer(1)), aod::Error);
  CHECK_THROWS_AS(table.reconstruct(AggValue::integer(1)), aod::Error);
  CHECK_THROWS_AS(aod::pack_max(g, AggValue::integer(3)), aod::Error);
  CHECK_THROWS_AS(aod::pack_count(g, AggValue::integer(4)), aod::Error);
  CHECK_THROWS_AS(aod::pack_median_naive(g, AggValue::integer(9)), aod::Error);
}

TEST_CASE("count and countd closed forms") {
  aod::Group g = make_group(0, {4, 4, 7, 7, 7, 9});
  PackTable count = aod::build_pack_table(g, Aggregate::Count,
                                          PackerKind::Optimized, std::nullopt);
  REQUIRE(count.entries().size() == 6);
  for (i64 k = 1; k <= 6; ++k) {
    CHECK(count.size_at(AggValue::integer(k)) == k);
    CHECK(static_cast<i64>(count.reconstruct(AggValue::integer(k)).size()) ==
          k);
  }
  PackTable countd = aod::build_pack_table(
      g, Aggregate::CountDistinct, PackerKind::Optimized, std::nullopt);
  CHECK(countd.size_at(AggValue::integer(1)) == 3);  // the three 7s
  CHECK(countd.size_at(AggValue::integer(2)) == 5);  // 7s plus both 4s
  CHECK(countd.size_at(AggValue::integer(3)) == 6);
  CHECK(countd.reconstruct(AggValue::integer(1)) ==
        std::vector<i64>{2, 3, 4});
}

}  // TEST_SUITE
