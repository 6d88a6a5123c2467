#include "aod/value.hpp"

#include <limits>
#include <ostream>

#include "aod/error.hpp"

namespace aod {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyBag: return "EmptyBag";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::InfeasibleValue: return "InfeasibleValue";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::BoundTooTight: return "BoundTooTight";
    case ErrorCode::CorruptBacktrace: return "CorruptBacktrace";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonIntegralValue: return "NonIntegralValue";
    case ErrorCode::OverflowDetected: return "OverflowDetected";
  }
  return "UnknownError";
}

namespace {

using i128 = __int128;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(i128 v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    fail(ErrorCode::OverflowDetected, std::string("rational ") + what +
                                          " does not fit in 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

AggValue normalized(i128 num, i128 den) {
  if (den == 0) {
    fail(ErrorCode::OverflowDetected, "rational with zero denominator");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return AggValue{0, 1};
  i128 g = gcd128(num, den);
  num /= g;
  den /= g;
  return AggValue{narrow(num, "numerator"), narrow(den, "denominator")};
}

}  // namespace

AggValue AggValue::integer(std::int64_t v) { return AggValue{v, 1}; }

AggValue AggValue::count(std::int64_t v) { return AggValue{v, 1}; }

AggValue AggValue::half(std::int64_t twice) {
  return normalized(twice, 2);
}

AggValue AggValue::ratio(std::int64_t n, std::int64_t d) {
  return normalized(n, d);
}

int AggValue::compare(const AggValue& a, const AggValue& b) {
  // den > 0 on both sides, so cross multiplication preserves the order.
  i128 lhs = static_cast<i128>(a.num) * b.den;
  i128 rhs = static_cast<i128>(b.num) * a.den;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

AggValue operator+(const AggValue& a, const AggValue& b) {
  i128 num = static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den;
  i128 den = static_cast<i128>(a.den) * b.den;
  return normalized(num, den);
}

AggValue operator-(const AggValue& a, const AggValue& b) {
  i128 num = static_cast<i128>(a.num) * b.den - static_cast<i128>(b.num) * a.den;
  i128 den = static_cast<i128>(a.den) * b.den;
  return normalized(num, den);
}

std::string AggValue::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

std::string AggValue::ratio_str() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

std::ostream& operator<<(std::ostream& os, const AggValue& v) {
  return os << v.str();
}

}  // namespace aod
