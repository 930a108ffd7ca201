#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "dvrlu/matrix.hpp"
#include "dvrlu/random.hpp"
#include "dvrlu/sheaf_basis.hpp"

namespace testsupport {

using namespace dvrlu;

inline PrecElem I(const Ring& r, long n, std::int64_t N) { return PrecElem::from_integer(r, n, N); }

// Random series matrix whose constant term lies in GL_d(R). Coefficient k
// is pi^(-k w) times a Haar element, known modulo pi^(N - k w).
inline SeriesMatrix random_series_matrix(Rng& g, const Ring& R, std::size_t d, std::size_t order,
                                         std::int64_t N, std::int64_t w = 0) {
  for (;;) {
    SeriesMatrix m(d, d, Series());
    for (auto& s : m.data) {
      std::vector<PrecElem> c;
      for (std::size_t k = 0; k < order; ++k) {
        const std::int64_t kw = std::int64_t(k) * w;
        PrecElem x = random_element(g, R, N);
        if (kw > 0) x = x * PrecElem::uniformizer_power(R, -kw, N);
        c.push_back(x);
      }
      s = Series(R, c);
    }
    const PrecElem det = determinant(constant_matrix(m));
    if (det.is_unit_form() && det.valuation().value == 0) return m;
  }
}

// Two points 0 and 1 (distinct residues), d x d, exponents drawn in [0, emax].
inline std::vector<LocalDatum> random_sheaf_instance(Rng& g, const Ring& R, std::size_t d,
                                                     std::int64_t emax, std::int64_t N,
                                                     std::size_t npoints = 2,
                                                     std::int64_t w = 0) {
  std::uniform_int_distribution<std::int64_t> E(0, emax);
  std::vector<LocalDatum> data;
  for (std::size_t m = 0; m < npoints; ++m) {
    std::vector<std::int64_t> e(d);
    for (auto& x : e) x = E(g);
    std::sort(e.begin(), e.end());
    data.push_back({PrecElem::from_integer(R, long(m), N),
                    random_series_matrix(g, R, d, std::size_t(e.back() + 1), N, w), e});
  }
  return data;
}

// L * B^-1 where B is the block diagonal of the unit lower L: the canonical
// representative of L modulo unit lower block-diagonal right factors.
inline SeriesMatrix canonical_l(const SeriesMatrix& L, const BlockType& type) {
  const std::size_t d = L.rows;
  SeriesMatrix X = L;
  for (std::size_t s = 0; s < type.count(); ++s) {
    const std::size_t b0 = type.boundary(s), b1 = type.boundary(s + 1);
    for (std::size_t c = b1; c-- > b0;)
      for (std::size_t r = 0; r < d; ++r) {
        Series acc = L(r, c);
        for (std::size_t k = c + 1; k < b1; ++k) acc = acc - X(r, k) * L(k, c);
        X(r, c) = acc;
      }
  }
  return X;
}

// Normal-approximation half width of a 99% interval on a proportion.
inline double ci99(double freq, std::size_t n) {
  return 2.5758293035489004 * std::sqrt(std::max(freq * (1 - freq), 1e-12) / double(n));
}

}  // namespace testsupport
