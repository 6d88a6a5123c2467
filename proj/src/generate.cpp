#include "aod/generate.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "aod/error.hpp"

namespace aod {

namespace {

// Uniform draw from {0..bound-1} by rejection, so every bound is exactly
// uniform regardless of the 2^64 word size.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  std::uint64_t zone = UINT64_MAX - UINT64_MAX % bound;
  while (true) {
    std::uint64_t v = rng();
    if (v < zone) return v % bound;
  }
}

}  // namespace

GenResult generate(const GenParams& p) {
  if (p.rows < 0) fail(ErrorCode::InvalidParams, "rows must be >= 0");
  if (p.groups < 1) fail(ErrorCode::InvalidParams, "groups must be >= 1");
  if (!(p.noise_frac >= 0.0 && p.noise_frac <= 1.0)) {
    fail(ErrorCode::InvalidParams, "noise_frac must be in [0, 1]");
  }
  if (p.violating_groups < 1 || p.violating_groups > p.groups) {
    fail(ErrorCode::InvalidParams,
         "violating_groups must be in [1, groups]");
  }

  std::mt19937_64 rng(p.seed);
  std::int64_t n_noise =
      static_cast<std::int64_t>(std::llround(p.rows * p.noise_frac));
  if (n_noise > p.rows) n_noise = p.rows;
  std::int64_t n_clean = p.rows - n_noise;

  std::vector<Tuple> tuples;
  tuples.reserve(static_cast<std::size_t>(p.rows));
  for (std::int64_t i = 0; i < n_clean; ++i) {
    Tuple t;
    t.id = i;
    t.value = 1 + static_cast<std::int64_t>(draw_below(rng, 100));
    t.group = static_cast<std::int64_t>(
        draw_below(rng, static_cast<std::uint64_t>(p.groups)));
    tuples.push_back(t);
  }
  for (std::int64_t i = 0; i < n_noise; ++i) {
    Tuple t;
    t.id = n_clean + i;
    t.value = 101 + static_cast<std::int64_t>(draw_below(rng, 20));
    t.group = static_cast<std::int64_t>(
        draw_below(rng, static_cast<std::uint64_t>(p.violating_groups)));
    tuples.push_back(t);
  }

  GenResult result;
  result.relation = Relation::from_tuples(std::move(tuples));
  result.clean_rows = n_clean;
  result.noise_rows = n_noise;
  return result;
}

}  // namespace aod
