#include "dvrlu/random.hpp"

#include <vector>

#include "dvrlu/error.hpp"

namespace dvrlu {

Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t x = seed ^ trial;
  std::seed_seq seq{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(x >> 32),
                    static_cast<std::uint32_t>(trial), 0x5eedu};
  return Rng(seq);
}

PrecElem random_element(Rng& rng, const Ring& ring, std::int64_t N) {
  if (N < 1) throw InvalidArgument("random_element needs N >= 1");
  const unsigned k = ring.digits_per_word();
  if (ring.is_padic()) {
    // Digits are drawn k at a time as one uniform word in [0, p^k).
    mpz_class x = 0;
    std::int64_t left = N;
    while (left > 0) {
      const unsigned take = static_cast<unsigned>(std::min<std::int64_t>(left, k));
      const std::uint64_t mod =
          take == k ? ring.word_modulus() : static_cast<std::uint64_t>(ring.pow(take).get_ui());
      std::uniform_int_distribution<std::uint64_t> dist(0, mod - 1);
      const std::uint64_t w = dist(rng);
      x *= static_cast<unsigned long>(mod);
      x += static_cast<unsigned long>(w);
      left -= take;
    }
    return PrecElem::from_integer(ring, x, N);
  }
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(N));
  std::size_t pos = 0;
  while (pos < digits.size()) {
    std::uniform_int_distribution<std::uint64_t> dist(0, ring.word_modulus() - 1);
    std::uint64_t w = dist(rng);
    for (unsigned i = 0; i < k && pos < digits.size(); ++i) {
      digits[pos++] = static_cast<std::uint32_t>(w % ring.p());
      w /= ring.p();
    }
  }
  return PrecElem::from_digits(ring, 0, digits, N);
}

PrecMatrix random_matrix(Rng& rng, const Ring& ring, std::size_t rows, std::size_t cols,
                         std::int64_t N) {
  PrecMatrix m(ring, rows, cols, N);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_element(rng, ring, N);
  return m;
}

PrecMatrix random_invertible_matrix(Rng& rng, const Ring& ring, std::size_t d, std::int64_t N) {
  for (;;) {
    PrecMatrix m = random_matrix(rng, ring, d, N);
    PrecElem det = determinant(m);
    if (det.is_unit_form() && det.valuation().value == 0) return m;
  }
}

PrecMatrix refine_matrix(Rng& rng, const PrecMatrix& m, std::int64_t N, std::int64_t extra) {
  const Ring& ring = m.ring();
  const PrecElem shift = PrecElem::uniformizer_power(ring, N, N + extra);
  PrecMatrix out = m.lifted(N + extra);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(i, j) = (out(i, j) + shift * random_element(rng, ring, extra).lifted(extra))
                      .truncated(N + extra);
  return out;
}

}  // namespace dvrlu
