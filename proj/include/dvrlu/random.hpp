#pragma once

#include <cstdint>
#include <random>

#include "dvrlu/matrix.hpp"

namespace dvrlu {

using Rng = std::mt19937_64;

// Independent stream for trial t of a run seeded with `seed`.
Rng trial_rng(std::uint64_t seed, std::uint64_t trial);

// Haar-distributed element of R known modulo pi^N.
PrecElem random_element(Rng& rng, const Ring& ring, std::int64_t N);
PrecMatrix random_matrix(Rng& rng, const Ring& ring, std::size_t rows, std::size_t cols,
                         std::int64_t N);
inline PrecMatrix random_matrix(Rng& rng, const Ring& ring, std::size_t d, std::int64_t N) {
  return random_matrix(rng, ring, d, d, N);
}

// Haar matrix conditioned on det being a unit (rejection sampling).
PrecMatrix random_invertible_matrix(Rng& rng, const Ring& ring, std::size_t d, std::int64_t N);

// Extends `m` from precision N to N + extra with fresh uniform digits, so the
// result is again Haar at the higher precision given the first N digits.
PrecMatrix refine_matrix(Rng& rng, const PrecMatrix& m, std::int64_t N, std::int64_t extra);

}  // namespace dvrlu
