#include "aod/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <vector>

#include "aod/error.hpp"

namespace aod {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

i64 narrow_or_fail(i128 v, const char* what) {
  if (v > i128(INT64_MAX) || v < i128(INT64_MIN)) {
    fail(ErrorCode::OverflowDetected, what);
  }
  return static_cast<i64>(v);
}

[[noreturn]] void parse_error(i64 row, const std::string& column,
                              const std::string& detail) {
  fail(ErrorCode::ParseError, "row " + std::to_string(row) + ", column '" +
                                  column + "': " + detail);
}

}  // namespace

std::optional<AggValue> parse_decimal(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }
  i128 mantissa = 0;
  i64 frac_digits = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    any_digit = true;
    mantissa = mantissa * 10 + (c - '0');
    if (mantissa > i128(INT64_MAX)) return std::nullopt;
    if (seen_point) ++frac_digits;
  }
  if (!any_digit) return std::nullopt;
  i64 den = 1;
  for (i64 k = 0; k < frac_digits; ++k) {
    if (den > INT64_MAX / 10) return std::nullopt;
    den *= 10;
  }
  i64 num = static_cast<i64>(mantissa);
  return AggValue::ratio(negative ? -num : num, den);
}

i64 floor_div_rational(const AggValue& x, const AggValue& width) {
  if (!(width > AggValue::zero())) {
    fail(ErrorCode::InvalidParams, "bin width must be positive");
  }
  // x / width = (x.num * width.den) / (x.den * width.num); both dens > 0.
  i128 num = i128(x.num) * width.den;
  i128 den = i128(x.den) * width.num;
  i128 q = num / den;
  if (num % den != 0 && (num < 0) != (den < 0)) --q;
  return narrow_or_fail(q, "floor division overflows");
}

i64 round_scaled(const AggValue& x, i64 scale) {
  if (scale < 1) fail(ErrorCode::InvalidParams, "scale factor must be >= 1");
  i128 num = i128(x.num) * scale;
  i128 den = x.den;  // > 0
  i128 q = num / den;
  i128 rem = num % den;
  if (rem < 0) rem = -rem;
  if (2 * rem >= den) q += (num < 0) ? -1 : 1;
  return narrow_or_fail(q, "scaled value overflows");
}

namespace {

// One preprocessed column value or a parse failure to report/skip.
struct CellOutcome {
  bool ok = false;
  i64 value = 0;
  std::string detail;
};

CellOutcome group_cell(const std::string& raw, const IngestConfig& cfg) {
  CellOutcome out;
  auto parsed = parse_decimal(raw);
  if (!parsed) {
    out.detail = "not a decimal number: '" + raw + "'";
    return out;
  }
  if (cfg.group_bin_width) {
    out.value = floor_div_rational(*parsed, *cfg.group_bin_width);
  } else {
    if (!parsed->is_integral()) {
      fail(ErrorCode::NonIntegralValue,
           "group value " + parsed->str() + " needs a bin width");
    }
    out.value = parsed->num;
  }
  out.ok = true;
  return out;
}

CellOutcome agg_cell(const std::string& raw, const IngestConfig& cfg) {
  CellOutcome out;
  auto parsed = parse_decimal(raw);
  if (!parsed) {
    out.detail = "not a decimal number: '" + raw + "'";
    return out;
  }
  AggValue v = *parsed;
  if (cfg.agg_truncate_cap && *cfg.agg_truncate_cap < v) {
    v = *cfg.agg_truncate_cap;
  }
  if (cfg.agg_bin_width) {
    out.value = floor_div_rational(v, *cfg.agg_bin_width);
  } else if (cfg.agg_scale_factor == 1) {
    if (!v.is_integral()) {
      fail(ErrorCode::NonIntegralValue,
           "aggregate value " + v.str() +
               " needs a scale factor or bin width");
    }
    out.value = v.num;
  } else {
    out.value = round_scaled(v, cfg.agg_scale_factor);
  }
  out.ok = true;
  return out;
}

}  // namespace

LoadResult load_csv(std::istream& in, const IngestConfig& config) {
  if (config.agg_scale_factor < 1) {
    fail(ErrorCode::InvalidParams, "scale factor must be >= 1");
  }
  for (const auto& w : {config.group_bin_width, config.agg_bin_width}) {
    if (w && !(*w > AggValue::zero())) {
      fail(ErrorCode::InvalidParams, "bin width must be positive");
    }
  }

  std::string line;
  if (!std::getline(in, line)) {
    fail(ErrorCode::ParseError, "empty input: missing header row");
  }
  if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' &&
      line[2] == '\xBF') {
    line = line.substr(3);  // strip UTF-8 byte-order mark
  }
  std::vector<std::string> header = split_csv_line(line);
  std::string raw_header = line;
  auto column_index = [&](const std::string& name) -> i64 {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<i64>(i);
    }
    fail(ErrorCode::MissingColumn, "no column named '" + name + "'");
  };
  i64 group_idx = column_index(config.group_column);
  i64 agg_idx = column_index(config.agg_column);

  LoadResult result;
  std::vector<Tuple> tuples;
  i64 row_number = 0;  // 1-based data row
  i64 next_id = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row_number;
    ++result.report.rows_read;
    std::vector<std::string> fields = split_csv_line(line);
    i64 width = static_cast<i64>(fields.size());
    if (group_idx >= width || agg_idx >= width) {
      if (config.lenient) {
        ++result.report.rows_skipped;
        continue;
      }
      parse_error(row_number,
                  group_idx >= width ? config.group_column : config.agg_column,
                  "row has only " + std::to_string(width) + " fields");
    }
    CellOutcome g = group_cell(fields[static_cast<std::size_t>(group_idx)],
                               config);
    if (!g.ok) {
      if (config.lenient) {
        ++result.report.rows_skipped;
        continue;
      }
      parse_error(row_number, config.group_column, g.detail);
    }
    CellOutcome a = agg_cell(fields[static_cast<std::size_t>(agg_idx)],
                             config);
    if (!a.ok) {
      if (config.lenient) {
        ++result.report.rows_skipped;
        continue;
      }
      parse_error(row_number, config.agg_column, a.detail);
    }
    Tuple t;
    t.id = next_id++;
    t.group = g.value;
    t.value = a.value;
    tuples.push_back(t);
    result.raw_rows.push_back(line);
  }
  result.raw_header = raw_header;
  result.relation = Relation::from_tuples(std::move(tuples));
  return result;
}

LoadResult load_csv(const std::string& path, const IngestConfig& config) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::ParseError, "cannot open file: " + path);
  }
  return load_csv(in, config);
}

void write_csv(const Relation& rel, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    fail(ErrorCode::ParseError, "cannot open file for writing: " + path);
  }
  out << "group,value\n";
  for (const Tuple& t : rel.all_tuples()) {
    out << t.group << "," << t.value << "\n";
  }
  if (!out) {
    fail(ErrorCode::ParseError, "write failed: " + path);
  }
}

ZScoreResult zscore_filter(const Relation& rel, const AggValue& tau,
                           ZScope scope) {
  if (!(tau > AggValue::zero())) {
    fail(ErrorCode::InvalidParams, "zscore tau must be positive");
  }
  // Exact test: |a - S/n| > (p/q) * sqrt((n*sum_sq - S^2)/n^2)
  //   <=>  q^2 * (n*a - S)^2 > p^2 * (n*sum_sq - S^2).
  auto removes = [&](const std::vector<Tuple>& bag, std::vector<i64>& out) {
    i64 n = static_cast<i64>(bag.size());
    if (n == 0) return;
    i128 s = 0;
    i128 sum_sq = 0;
    for (const Tuple& t : bag) {
      s += t.value;
      sum_sq += i128(t.value) * t.value;
    }
    i128 var_num = i128(n) * sum_sq - s * s;  // n^2 * variance, >= 0
    i128 p2 = i128(tau.num) * tau.num;
    i128 q2 = i128(tau.den) * tau.den;
    for (const Tuple& t : bag) {
      i128 dev = i128(n) * t.value - s;  // n * (a - mean)
      if (q2 * dev * dev > p2 * var_num) out.push_back(t.id);
    }
  };

  std::vector<i64> removed;
  if (scope == ZScope::Global) {
    removes(rel.all_tuples(), removed);
  } else {
    for (const Group& g : rel.groups()) removes(g.tuples, removed);
  }
  std::sort(removed.begin(), removed.end());
  ZScoreResult result;
  result.removed_ids = removed;
  result.relation = rel.without(removed);
  return result;
}

}  // namespace aod
