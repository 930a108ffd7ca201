#include <vector>

#include "doctest.h"
#include "dvrlu/error.hpp"
#include "dvrlu/poly.hpp"
#include "dvrlu/random.hpp"
#include "dvrlu/sheaf_basis.hpp"
#include "oracle/exact.hpp"
#include "support.hpp"

using namespace dvrlu;
using testsupport::I;

namespace {

Poly int_poly(const Ring& R, const std::vector<long>& c, std::int64_t N) {
  std::vector<PrecElem> e;
  for (long x : c) e.push_back(I(R, x, N));
  return Poly(R, e);
}

Poly random_poly(Rng& g, const Ring& R, std::size_t n, std::int64_t N) {
  std::vector<PrecElem> c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(random_element(g, R, N));
  return Poly(R, c);
}

bool same_mod(const Poly& a, const Poly& b, std::int64_t n) {
  const std::size_t m = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < m; ++i)
    if (!agree_mod(a.coeff(i, n), b.coeff(i, n), n)) return false;
  return true;
}

}  // namespace

TEST_CASE("Taylor shift examples") {
  for (auto be : {Backend::padic, Backend::power_series}) {
    const Ring& R = Ring::get(be, 5);
    const Series s = taylor_shift(int_poly(R, {0, 0, 1}, 20), I(R, 1, 20), 3);
    REQUIRE(s.order() == 3);
    CHECK(s.c[0] == I(R, 1, 20));
    CHECK(s.c[1] == I(R, 2, 20));
    CHECK(s.c[2] == I(R, 1, 20));
  }
  // p = 2: the middle coefficient is 2 exactly, with no lost digit
  const Ring& R2 = Ring::get(Backend::padic, 2);
  const Series s = taylor_shift(int_poly(R2, {0, 0, 1}, 20), I(R2, 1, 20), 3);
  CHECK(s.c[1].valuation() == Valuation{1, true});
  CHECK(s.c[1].abs_prec() == 20);
  CHECK(oracle::agrees(s.c[1], mpq_class(2)));

  // integer polynomial against exact binomial expansion
  const Poly f = int_poly(R2, {3, -1, 4, 1, -5, 9}, 40);
  const Series t = taylor_shift(f, I(R2, 6, 40), 6);
  const std::vector<long> fc{3, -1, 4, 1, -5, 9};
  for (std::size_t i = 0; i < 6; ++i) {
    mpz_class exact = 0;
    for (std::size_t k = i; k < 6; ++k) {
      mpz_class binom, pw;
      mpz_bin_uiui(binom.get_mpz_t(), k, i);
      mpz_ui_pow_ui(pw.get_mpz_t(), 6, k - i);
      exact += fc[k] * binom * pw;
    }
    CHECK(oracle::agrees(t.c[i], mpq_class(exact)));
    CHECK(t.c[i].abs_prec() == 40);
  }
}

TEST_CASE("Taylor shift round trip") {
  for (auto be : {Backend::padic, Backend::power_series}) {
    const Ring& R = Ring::get(be, 3);
    Rng g(4);
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 1 + std::size_t(t % 7);
      const Poly f = random_poly(g, R, n, 25);
      const PrecElem a = random_element(g, R, 60);
      const Series s = taylor_shift(f, a, n);
      CHECK(same_mod(inverse_taylor_shift(s, a), f, 25));
      // evaluation at a is the constant coefficient
      CHECK(agree_mod(s.c[0], evaluate(f, a), 25));
    }
  }
}

TEST_CASE("series and polynomial arithmetic") {
  const Ring& R = Ring::get(Backend::padic, 5);
  Rng g(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<PrecElem> c;
    for (int k = 0; k < 5; ++k) c.push_back(random_element(g, R, 20));
    const Series s(R, c);
    if (!(s.c[0].is_unit_form() && s.c[0].valuation().value == 0)) continue;
    const Series prod = s * inverse(s);
    CHECK(agree_mod(prod.c[0], PrecElem::one(R, 20), 20));
    for (std::size_t k = 1; k < 5; ++k) CHECK(agree_mod(prod.c[k], PrecElem::zero(R, 20), 20));
  }
  const Poly num = int_poly(R, {2, 0, 3, 1}, 30);
  const Poly den = int_poly(R, {-1, 1}, 30);
  const auto [q, r] = divmod_monic(num, den);
  CHECK(same_mod(q * den + r, num, 30));
  CHECK(r.size() <= 1);
  CHECK(agree_mod(r.coeff(0, 30), I(R, 6, 30), 30));
  CHECK(same_mod(power(den, 3, 30), den * den * den, 30));
}

TEST_CASE("block types from exponents") {
  CHECK(block_type_from_exponents({0, 0, 2, 2, 5}) == BlockType({2, 2, 1}));
  CHECK(block_type_from_exponents({3, 3, 3}) == BlockType::single(3));
  CHECK(block_type_from_exponents({0, 1, 2, 7}) == BlockType::scalar(4));
  CHECK_THROWS_AS(block_type_from_exponents({0, 2, 1}), NotSorted);
}

TEST_CASE("the diagonal D") {
  const Ring& R = Ring::get(Backend::padic, 5);
  const std::int64_t N = 20;
  auto datum = [&](long a, std::vector<std::int64_t> e) {
    const std::size_t d = e.size();
    SeriesMatrix m(d, d, Series::zero(R, std::size_t(e.back() + 1), N));
    for (std::size_t i = 0; i < d; ++i) m(i, i) = Series::constant(PrecElem::one(R, N), std::size_t(e.back() + 1));
    return LocalDatum{I(R, a, N), m, e};
  };
  {
    const auto D = build_D({datum(0, {0, 1})});
    REQUIRE(D.size() == 2);
    CHECK(same_mod(D[0], int_poly(R, {1}, N), N));
    CHECK(same_mod(D[1], int_poly(R, {0, 1}, N), N));
  }
  {
    const auto D = build_D({datum(0, {1, 1}), datum(1, {0, 2})});
    CHECK(same_mod(D[0], int_poly(R, {0, 1}, N), N));
    // X (X - 1)^2 = X^3 - 2 X^2 + X
    CHECK(same_mod(D[1], int_poly(R, {0, 1, -2, 1}, N), N));
    CHECK(D[1].size() - 1 == 3);
  }
  CHECK_THROWS_AS(build_D({datum(2, {0, 1}), datum(2, {1, 1})}), CoincidentPoints);
}

TEST_CASE("interpolation of local factors") {
  const Ring& R = Ring::get(Backend::padic, 5);
  const std::int64_t N = 30;
  // one point: the inverse Taylor shift of the local factor
  {
    SeriesMatrix L(2, 2, Series::zero(R, 3, N));
    L(0, 0) = L(1, 1) = Series::constant(PrecElem::one(R, N), 3);
    L(1, 0) = Series(R, {I(R, 4, N), I(R, 7, N), I(R, 2, N)});
    const PrecElem a = I(R, 3, N);
    const PolyMatrix P = crt_unit_lower({L}, {a});
    CHECK(same_mod(P(1, 0), inverse_taylor_shift(L(1, 0), a), N - 2));
  }
  // two points, order one: c0 + (c1 - c0) X
  {
    SeriesMatrix L0(2, 2, Series::zero(R, 1, N)), L1 = L0;
    L0(0, 0) = L0(1, 1) = L1(0, 0) = L1(1, 1) = Series::constant(PrecElem::one(R, N), 1);
    L0(1, 0) = Series::constant(I(R, 7, N), 1);
    L1(1, 0) = Series::constant(I(R, 19, N), 1);
    const PolyMatrix P = crt_unit_lower({L0, L1}, {I(R, 0, N), I(R, 1, N)});
    CHECK(same_mod(P(1, 0), int_poly(R, {7, 12}, N), N - 2));
    CHECK(same_mod(P(0, 0), int_poly(R, {1}, N), N - 2));
    CHECK(P(0, 1).c.empty());
  }
  // random: re-expanding at every point reproduces the local factors
  Rng g(9);
  for (int t = 0; t < 30; ++t) {
    const std::vector<PrecElem> pts{I(R, 0, N), I(R, 1, N), I(R, 3, N)};
    std::vector<SeriesMatrix> Ls;
    for (std::size_t m = 0; m < pts.size(); ++m) {
      const std::size_t order = 1 + std::size_t((t + int(m)) % 4);
      SeriesMatrix L(3, 3, Series::zero(R, order, N));
      for (std::size_t i = 0; i < 3; ++i) {
        L(i, i) = Series::constant(PrecElem::one(R, N), order);
        for (std::size_t j = 0; j < i; ++j) {
          std::vector<PrecElem> c;
          for (std::size_t k = 0; k < order; ++k) c.push_back(random_element(g, R, N));
          L(i, j) = Series(R, c);
        }
      }
      Ls.push_back(L);
    }
    const PolyMatrix P = crt_unit_lower(Ls, pts);
    for (std::size_t m = 0; m < pts.size(); ++m) {
      const SeriesMatrix back = taylor_shift(P, pts[m], Ls[m].rows ? Ls[m](0, 0).order() : 1);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < i; ++j)
          for (std::size_t k = 0; k < back(i, j).order(); ++k) {
            const PrecElem& got = back(i, j).c[k];
            CHECK(got.abs_prec() >= N - 10);
            CHECK(agree_mod(got, Ls[m](i, j).c[k], got.abs_prec()));
          }
    }
  }
}
