#include <doctest.h>

#include <map>
#include <sstream>

#include "aod/error.hpp"
#include "aod/value.hpp"

using aod::AggValue;

TEST_SUITE("value") {

TEST_CASE("factories normalize to lowest terms with positive denominator") {
  CHECK(AggValue::ratio(4, 2).num == 2);
  CHECK(AggValue::ratio(4, 2).den == 1);
  CHECK(AggValue::ratio(-4, 8).num == -1);
  CHECK(AggValue::ratio(-4, 8).den == 2);
  CHECK(AggValue::ratio(3, -6).num == -1);
  CHECK(AggValue::ratio(3, -6).den == 2);
  CHECK(AggValue::ratio(0, -7).num == 0);
  CHECK(AggValue::ratio(0, -7).den == 1);
  CHECK(AggValue::integer(5).den == 1);
  CHECK(AggValue::count(3) == AggValue::integer(3));
}

TEST_CASE("half stores twice-the-value exactly") {
  AggValue h = AggValue::half(9);  // 9/2
  CHECK(h.num == 9);
  CHECK(h.den == 2);
  CHECK(AggValue::half(8) == AggValue::integer(4));
}

TEST_CASE("comparison is exact cross-multiplication") {
  CHECK(AggValue::ratio(1, 3) < AggValue::ratio(1, 2));
  CHECK(AggValue::ratio(2, 4) == AggValue::ratio(1, 2));
  CHECK(AggValue::ratio(-1, 2) < AggValue::zero());
  CHECK(AggValue::ratio(7, 2) > AggValue::integer(3));
  CHECK(AggValue::ratio(22, 7) > AggValue::ratio(25, 8));
  // Values whose doubles would collide still order correctly.
  CHECK(AggValue::ratio(1000000000000000001, 3) >
        AggValue::ratio(1000000000000000000, 3));
}

TEST_CASE("addition and subtraction are exact") {
  CHECK(AggValue::ratio(1, 2) + AggValue::ratio(1, 3) == AggValue::ratio(5, 6));
  CHECK(AggValue::ratio(1, 2) - AggValue::ratio(1, 2) == AggValue::zero());
  CHECK(AggValue::integer(2) - AggValue::ratio(9, 2) ==
        AggValue::ratio(-5, 2));
  AggValue s = AggValue::zero();
  for (int i = 0; i < 10; ++i) s = s + AggValue::ratio(1, 10);
  CHECK(s == AggValue::integer(1));
}

TEST_CASE("str is canonical; ratio_str always fractional") {
  CHECK(AggValue::integer(3).str() == "3");
  CHECK(AggValue::half(9).str() == "9/2");
  CHECK(AggValue::ratio(22, 7).str() == "22/7");
  CHECK(AggValue::ratio(-3, 2).str() == "-3/2");
  CHECK(AggValue::integer(3).ratio_str() == "3/1");
  CHECK(AggValue::zero().ratio_str() == "0/1");
  std::ostringstream os;
  os << AggValue::ratio(3, 2);
  CHECK(os.str() == "3/2");
}

TEST_CASE("integrality and zero checks") {
  CHECK(AggValue::integer(7).is_integral());
  CHECK_FALSE(AggValue::ratio(7, 2).is_integral());
  CHECK(AggValue::zero().is_zero());
  CHECK_FALSE(AggValue::ratio(1, 9).is_zero());
}

TEST_CASE("ordering works as std::map key") {
  std::map<AggValue, int> m;
  m[AggValue::ratio(1, 2)] = 1;
  m[AggValue::ratio(2, 4)] = 2;  // same rational: overwrites
  m[AggValue::integer(1)] = 3;
  CHECK(m.size() == 2);
  CHECK(m.begin()->first == AggValue::ratio(1, 2));
  CHECK(m.begin()->second == 2);
}

TEST_CASE("zero denominator is rejected") {
  CHECK_THROWS_AS(AggValue::ratio(1, 0), aod::Error);
}

TEST_CASE("narrowing overflow is detected, not wrapped") {
  AggValue big = AggValue::ratio(INT64_MAX, 3);
  CHECK_THROWS_AS(big + big, aod::Error);
  try {
    big + big;
  } catch (const aod::Error& e) {
    CHECK(e.code() == aod::ErrorCode::OverflowDetected);
  }
}

}  // TEST_SUITE
