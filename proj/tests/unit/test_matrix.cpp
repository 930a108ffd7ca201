#include <random>
#include <vector>

#include "doctest.h"
#include "dvrlu/error.hpp"
#include "dvrlu/matrix.hpp"
#include "dvrlu/random.hpp"
#include "oracle/exact.hpp"

using namespace dvrlu;

namespace {

std::vector<std::vector<long>> random_integers(Rng& g, std::size_t d, long bound) {
  std::uniform_int_distribution<long> u(-bound, bound);
  std::vector<std::vector<long>> a(d, std::vector<long>(d));
  for (auto& row : a)
    for (auto& x : row) x = u(g);
  return a;
}

}  // namespace

TEST_CASE("identity and products") {
  const Ring& R = Ring::get(Backend::padic, 5);
  Rng g(1);
  const PrecMatrix a = random_matrix(g, R, 4, 20);
  const PrecMatrix id = PrecMatrix::identity(R, 4, 100);
  CHECK(a * id == a);
  CHECK(id * a == a);
  CHECK(a.transposed().transposed() == a);
  CHECK((a + a) == PrecElem::from_integer(R, 2, 100) * a);
  CHECK((a - a).min_valuation().exact == false);
}

TEST_CASE("determinant and inverse match exact arithmetic") {
  for (unsigned p : {2u, 3u, 5u}) {
    const Ring& R = Ring::get(Backend::padic, p);
    Rng g(p);
    for (int t = 0; t < 200; ++t) {
      const std::size_t d = 1 + std::size_t(t % 5);
      const auto a = random_integers(g, d, 30);
      const oracle::QMatrix q = oracle::from_integers(a);
      const mpq_class det = oracle::det(q);
      const PrecMatrix m = PrecMatrix::from_integers(R, a, 40);
      const PrecElem dm = determinant(m);
      CHECK(oracle::agrees(dm, det));
      if (det == 0 || dm.is_big_oh()) continue;
      const PrecMatrix inv = inverse(m);
      const PrecMatrix prod = m * inv;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) CHECK(oracle::agrees(prod(i, j), i == j ? 1 : 0));
    }
  }
}

TEST_CASE("singular matrices are reported") {
  const Ring& R = Ring::get(Backend::padic, 3);
  const PrecMatrix m = PrecMatrix::from_integers(R, {{1, 2}, {2, 4}}, 10);
  CHECK(determinant(m).is_big_oh());
  CHECK_THROWS_AS(inverse(m), DivisionByUnknownZero);
}

TEST_CASE("block helpers and precision queries") {
  const Ring& R = Ring::get(Backend::power_series, 3);
  Rng g(8);
  PrecMatrix a = random_matrix(g, R, 4, 12);
  const PrecMatrix b = a.block(1, 1, 2, 2);
  CHECK(b(0, 0) == a(1, 1));
  PrecMatrix c = a;
  c.set_block(1, 1, b);
  CHECK(c == a);
  CHECK(a.truncated(5).min_abs_prec() == 5);
  CHECK(a.lifted(20).min_abs_prec() == 20);
  CHECK(agree_mod(a, a.lifted(20), 12));
  a.swap_columns(0, 3);
  a.swap_columns(0, 3);
  CHECK(agree_mod(a, c, 12));
}
