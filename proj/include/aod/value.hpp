#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace aod {

// Exact rational aggregate value.  All aggregate results (including medians of
// even-size bags and averages) and all violation measures are represented this
// way; no algorithm path ever touches floating point.
//
// Invariant: den > 0 and gcd(|num|, den) == 1 (zero is 0/1).  Comparisons use
// 128-bit cross multiplication, so they are exact for any normalized pair of
// 64-bit components.  Arithmetic normalizes its result and reports
// OverflowDetected if the reduced result leaves the 64-bit range.
struct AggValue {
  std::int64_t num = 0;
  std::int64_t den = 1;

  // Factories named after the producing aggregate families.
  static AggValue integer(std::int64_t v);               // max / min / sum
  static AggValue count(std::int64_t v);                 // count / countd
  static AggValue half(std::int64_t twice);              // median: twice / 2
  static AggValue ratio(std::int64_t n, std::int64_t d); // avg and measures
  static AggValue zero() { return AggValue{}; }

  bool is_integral() const { return den == 1; }
  bool is_zero() const { return num == 0; }

  // Canonical display form: "5" when integral, else "num/den" ("9/2").
  std::string str() const;
  // Always-fractional display form used for violation measures: "0/1", "1/1".
  std::string ratio_str() const;

  friend bool operator==(const AggValue& a, const AggValue& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const AggValue& a, const AggValue& b) { return !(a == b); }
  friend bool operator<(const AggValue& a, const AggValue& b) { return compare(a, b) < 0; }
  friend bool operator>(const AggValue& a, const AggValue& b) { return compare(a, b) > 0; }
  friend bool operator<=(const AggValue& a, const AggValue& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const AggValue& a, const AggValue& b) { return compare(a, b) >= 0; }

  friend AggValue operator+(const AggValue& a, const AggValue& b);
  friend AggValue operator-(const AggValue& a, const AggValue& b);

  static int compare(const AggValue& a, const AggValue& b);
};

std::ostream& operator<<(std::ostream& os, const AggValue& v);

}  // namespace aod
