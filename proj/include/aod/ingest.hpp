#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aod/relation.hpp"
#include "aod/value.hpp"

namespace aod {

enum class ZScope { Global, PerGroup };

struct ZScoreConfig {
  AggValue tau;  // positive threshold, exact rational
  ZScope scope = ZScope::Global;
};

struct IngestConfig {
  std::string group_column;
  std::string agg_column;
  std::optional<AggValue> group_bin_width;   // > 0: group = floor(raw/width)
  std::optional<AggValue> agg_bin_width;     // > 0: value = floor(raw/width)
  std::optional<AggValue> agg_truncate_cap;  // value = min(raw, cap) first
  std::int64_t agg_scale_factor = 1;         // >= 1: value = round(raw*scale)
  std::optional<ZScoreConfig> zscore;        // applied by the caller, not here
  bool lenient = false;  // skip+count unparsable rows instead of failing
};

struct IngestReport {
  std::int64_t rows_read = 0;     // data rows seen (header excluded)
  std::int64_t rows_skipped = 0;  // lenient-mode rejects
};

struct LoadResult {
  Relation relation;
  IngestReport report;
  // Original text of the header and of each accepted row (indexed by tuple
  // id), so callers can emit removed/kept rows in the input's own format.
  std::string raw_header;
  std::vector<std::string> raw_rows;
};

// Exact decimal parser: optional sign, digits, optional fractional part.
// Returns the rational mantissa/10^k; nullopt when the text is not a plain
// decimal number.
std::optional<AggValue> parse_decimal(const std::string& text);

// floor(x / width) with mathematical (toward minus infinity) flooring.
std::int64_t floor_div_rational(const AggValue& x, const AggValue& width);

// round(x * scale), halves away from zero; exact in integer arithmetic.
std::int64_t round_scaled(const AggValue& x, std::int64_t scale);

// Reads a UTF-8, comma-separated, one-header-row file and applies the
// configured preprocessing.  Tuple ids number the accepted rows 0,1,2,... in
// input order.  Strict mode throws ParseError naming the 1-based data row and
// column; lenient mode counts the row as skipped.  Binning uses exact floor
// division; an unbinned column must come out integral (group column:
// NonIntegralValue always; aggregate column: NonIntegralValue when the scale
// factor is 1, otherwise round(raw*scale) half-away-from-zero).  The zscore
// entry of the config is not applied here — run zscore_filter on the result.
LoadResult load_csv(const std::string& path, const IngestConfig& config);
LoadResult load_csv(std::istream& in, const IngestConfig& config);

// Writes "group,value" rows in ascending id order (the generator's standard
// output format; round-trips through load_csv with no preprocessing).
void write_csv(const Relation& rel, const std::string& path);

struct ZScoreResult {
  Relation relation;                     // surviving tuples
  std::vector<std::int64_t> removed_ids; // ascending
};

// Removes tuples with |value - mean| > tau * std, population standard
// deviation, computed once over the whole relation (Global) or within each
// group (PerGroup).  Exact integer test (no floating point); std = 0 removes
// nothing.  Throws InvalidParams unless tau > 0.
ZScoreResult zscore_filter(const Relation& rel, const AggValue& tau,
                           ZScope scope);

}  // namespace aod
