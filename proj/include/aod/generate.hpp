#pragma once

#include <cstdint>
#include <string>

#include "aod/relation.hpp"

namespace aod {

// Parameters of the synthetic single-table generator: n tuples of which a
// fraction noise_frac are "noise" (values above the clean range) landing in
// the first violating_groups groups.
struct GenParams {
  std::int64_t rows = 0;
  std::int64_t groups = 10;
  double noise_frac = 0.0;
  std::int64_t violating_groups = 4;
  std::uint64_t seed = 0;
};

struct GenResult {
  Relation relation;
  std::int64_t clean_rows = 0;
  std::int64_t noise_rows = 0;
  // Metadata for reports: the PRNG scheme and how tuples pick their group.
  std::string prng = "mt19937_64/rejection";
  std::string group_assignment = "multinomial";
};

// Deterministic per seed.  Clean tuples (ids 0..clean-1) draw values from
// Uniform{1..100} and a group from Uniform{0..groups-1}; noise tuples (ids
// after the clean block) draw values from Uniform{101..120} and a group from
// Uniform{0..violating_groups-1}.  noise count = round(rows * noise_frac).
// Throws InvalidParams on out-of-range parameters.
GenResult generate(const GenParams& params);

}  // namespace aod
