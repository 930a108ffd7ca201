#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dvrlu/error.hpp"
#include "dvrlu/lu_stable.hpp"
#include "dvrlu/random.hpp"
#include "oracle/exact.hpp"
#include "support.hpp"

using namespace dvrlu;

namespace {

// [[pi, 1], [1, 1]]
PrecMatrix example(const Ring& R, std::int64_t N) {
  PrecMatrix m = PrecMatrix::from_integers(R, {{0, 1}, {1, 1}}, N);
  m(0, 0) = PrecElem::uniformizer_power(R, 1, N);
  return m;
}

double chi2_critical(std::size_t dof) {
  boost::math::chi_squared dist(static_cast<double>(dof));
  return boost::math::quantile(boost::math::complement(dist, 0.001));
}

// Geometric law P[V = v] = (1 - 1/q) q^-v with the tail from vmax lumped.
double geometric_chi2(const std::vector<std::size_t>& counts, std::size_t n, unsigned q) {
  double chi2 = 0, tail_expected = 1;
  for (std::size_t v = 0; v + 1 < counts.size(); ++v) {
    const double pr = (1 - 1.0 / q) * std::pow(double(q), -double(v));
    tail_expected -= pr;
    const double e = pr * double(n);
    chi2 += (double(counts[v]) - e) * (double(counts[v]) - e) / e;
  }
  const double e = tail_expected * double(n);
  chi2 += (double(counts.back()) - e) * (double(counts.back()) - e) / e;
  return chi2;
}

std::vector<std::vector<long>> random_integers(Rng& g, std::size_t d, long bound) {
  std::uniform_int_distribution<long> u(-bound, bound);
  std::vector<std::vector<long>> a(d, std::vector<long>(d));
  for (auto& row : a)
    for (auto& x : row) x = u(g);
  return a;
}

// Rows [r0, d) of X = L^-1 M in column block [c0, c1) must be known zeros.
void check_block_upper(const PrecMatrix& L, const PrecMatrix& M, const BlockType& type,
                       std::int64_t min_margin) {
  const PrecMatrix X = inverse(L) * M;
  for (std::size_t s = 0; s < type.count(); ++s) {
    const std::size_t c0 = type.boundary(s), c1 = type.boundary(s + 1);
    for (std::size_t j = c0; j < c1; ++j)
      for (std::size_t i = c1; i < X.rows(); ++i) {
        CHECK(X(i, j).is_big_oh());
        CHECK(X(i, j).abs_prec() >= min_margin);
      }
  }
}

bool is_unit_lower(const PrecMatrix& L) {
  for (std::size_t i = 0; i < L.rows(); ++i) {
    if (!(L(i, i).is_unit_form() && L(i, i).valuation().value == 0 &&
          agree_mod(L(i, i), PrecElem::one(L.ring(), L(i, i).abs_prec()), L(i, i).abs_prec())))
      return false;
    for (std::size_t j = i + 1; j < L.cols(); ++j)
      if (!L(i, j).is_big_oh()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("Algorithm 1 on small examples") {
  const Ring& R = Ring::get(Backend::padic, 5);
  const ValuationProfile id = vij_statistics(PrecMatrix::identity(R, 4, 20));
  for (auto v : id.diag) CHECK(v == Valuation{0, true});
  CHECK(id.det_val == Valuation{0, true});

  const ValuationProfile pr = vij_statistics(example(R, 10));
  CHECK(pr.at(0, 0) == Valuation{1, true});
  CHECK(pr.at(0, 1) == Valuation{0, true});
  CHECK(pr.at(1, 1) == Valuation{0, true});
  CHECK(pr.det_val == Valuation{0, true});
}

TEST_CASE("Algorithm 1 valuations follow the geometric law") {
  const Ring& R = Ring::get(Backend::padic, 2);
  const std::size_t n = 100000, d = 3, cells = 7;
  std::vector<std::vector<std::vector<std::size_t>>> counts(
      d, std::vector<std::vector<std::size_t>>(d, std::vector<std::size_t>(cells, 0)));
  std::vector<std::vector<double>> joint(4, std::vector<double>(4, 0));
  for (std::size_t t = 0; t < n; ++t) {
    Rng g = trial_rng(101, t);
    const ValuationProfile pr = vij_statistics(random_matrix(g, R, d, 64));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        REQUIRE(pr.at(i, j).exact);
        counts[i][j][std::min<std::size_t>(std::size_t(pr.at(i, j).value), cells - 1)]++;
      }
    joint[std::min<std::size_t>(std::size_t(pr.at(0, 0).value), 3)]
         [std::min<std::size_t>(std::size_t(pr.at(0, 1).value), 3)] += 1;
  }
  for (int v = 0; v <= 2; ++v) {
    const double f = double(counts[0][1][std::size_t(v)]) / n;
    CHECK(std::abs(f - 0.5 * std::pow(2.0, -v)) <= 0.01);
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      INFO("V(" << i + 1 << "," << j + 1 << ")");
      CHECK(geometric_chi2(counts[i][j], n, 2) < chi2_critical(cells - 1));
    }
  // contingency test of independence of V(1,1) and V(1,2)
  std::vector<double> rs(4, 0), cs(4, 0);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      rs[a] += joint[a][b];
      cs[b] += joint[a][b];
    }
  double chi2 = 0;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      const double e = rs[a] * cs[b] / double(n);
      chi2 += (joint[a][b] - e) * (joint[a][b] - e) / e;
    }
  CHECK(chi2 < chi2_critical(9));
}

TEST_CASE("leading minor valuations from the profile match exact minors") {
  for (unsigned p : {2u, 3u}) {
    const Ring& R = Ring::get(Backend::padic, p);
    Rng g(200 + p);
    for (int t = 0; t < 300; ++t) {
      const std::size_t d = 2 + std::size_t(t % 4);
      const auto a = random_integers(g, d, 200);
      const auto q = oracle::from_integers(a);
      const ValuationProfile pr = vij_statistics(PrecMatrix::from_integers(R, a, 200));
      for (std::size_t j = 1; j <= d; ++j) {
        const mpq_class minor = oracle::leading_minor(q, j);
        if (minor == 0) continue;
        const Valuation v = minor_valuation(pr, j);
        CHECK(v.exact);
        CHECK(v.value == oracle::valuation(minor, p));
      }
    }
  }
}

TEST_CASE("sandwich between the profile and V_L holds on every sample") {
  for (unsigned p : {2u, 3u}) {
    const Ring& R = Ring::get(Backend::padic, p);
    for (std::size_t t = 0; t < 3000; ++t) {
      Rng g = trial_rng(300 + p, t);
      const std::size_t d = 2 + t % 6;
      const PrecMatrix m = random_matrix(g, R, d, 80);
      const ValuationProfile pr = vij_statistics(m);
      const VlValue vl = vl_of(stable_l(m));
      REQUIRE(vl.exact());
      std::int64_t vmax = 0, vmax_head = 0;
      for (std::size_t i = 0; i < d; ++i) {
        vmax = std::max(vmax, pr.diag[i].value);
        if (i + 1 < d) vmax_head = std::max(vmax_head, pr.diag[i].value);
      }
      CHECK(vmax - pr.det_val.value <= vl.lo);
      CHECK(vl.lo <= vmax_head);
    }
  }
}

TEST_CASE("naive Gauss examples") {
  const Ring& R = Ring::get(Backend::padic, 5);
  const PrecMatrix id = naive_gauss_l(PrecMatrix::identity(R, 3, 10));
  CHECK(id == PrecMatrix::identity(R, 3, 10));
  const PrecMatrix L = naive_gauss_l(example(R, 10));
  CHECK(L(1, 0).abs_prec() == 8);
  CHECK(oracle::agrees(L(1, 0), mpq_class(1, 5)));
  CHECK(L(1, 0).valuation() == Valuation{-1, true});
  CHECK_THROWS_AS(naive_gauss_l(PrecMatrix::from_integers(R, {{0, 1}, {1, 1}}, 10)),
                  DivisionByUnknownZero);
}

TEST_CASE("stable L examples") {
  for (auto be : {Backend::padic, Backend::power_series}) {
    const Ring& R = Ring::get(be, 5);
    CHECK(stable_l(PrecMatrix::identity(R, 4, 10)) == PrecMatrix::identity(R, 4, 10));
    const PrecMatrix M = example(R, 10);
    const PrecMatrix L = stable_l(M);
    CHECK(is_unit_lower(L));
    CHECK(L(1, 0).valuation() == Valuation{-1, true});
    check_block_upper(L, M, BlockType::scalar(2), 5);
  }
  const Ring& R = Ring::get(Backend::padic, 5);
  CHECK(oracle::agrees(stable_l(example(R, 10))(1, 0), mpq_class(1, 5)));
}

TEST_CASE("stable L equals the Cramer quotients at every claimed digit") {
  for (unsigned p : {2u, 3u, 5u}) {
    const Ring& R = Ring::get(Backend::padic, p);
    Rng g(400 + p);
    int done = 0;
    while (done < 60) {
      const std::size_t d = 2 + std::size_t(done % 4);
      const auto a = random_integers(g, d, 100);
      const auto L_exact = oracle::cramer_l(oracle::from_integers(a));
      if (!L_exact) continue;
      const PrecMatrix L = stable_l(PrecMatrix::from_integers(R, a, 60));
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) CHECK(oracle::agrees(L(i, j), (*L_exact)[i][j]));
      ++done;
    }
  }
}

TEST_CASE("every precision claimed by stable L is achieved") {
  for (auto be : {Backend::padic, Backend::power_series}) {
    const Ring& R = Ring::get(be, 2);
    for (std::size_t t = 0; t < 300; ++t) {
      Rng g = trial_rng(500, t);
      const std::size_t d = 2 + t % 7;
      const std::int64_t N = 30;
      const PrecMatrix hi = random_matrix(g, R, d, N + 20);
      const PrecMatrix m = hi.truncated(N);
      PrecMatrix L, L2;
      try {
        L = stable_l(m);
        L2 = stable_l(hi);
      } catch (const PrecisionError&) {
        continue;
      }
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < i; ++j) CHECK(agree_mod(L(i, j), L2(i, j), L(i, j).abs_prec()));
      // every entry of column j is known at least modulo pi^(N - 2 v_j), with
      // v_j the valuation of the (j+1)-th leading minor
      const ValuationProfile pr = vij_statistics(m);
      for (std::size_t j = 0; j + 1 < d; ++j) {
        const Valuation vj = minor_valuation(pr, j + 1);
        REQUIRE(vj.exact);
        for (std::size_t i = j + 1; i < d; ++i) CHECK(L(i, j).abs_prec() >= N - 2 * vj.value);
      }
    }
  }
}

TEST_CASE("lifted recomputation") {
  CHECK(default_lift_extra(25, 5) == 10);
  CHECK(default_lift_extra(8, 2) == 8);
  const Ring& R = Ring::get(Backend::padic, 2);
  const LiftResult id = lift_recompute_l(PrecMatrix::identity(R, 5, 20), 0);
  CHECK(id.L == PrecMatrix::identity(R, 5, 20));
  CHECK(id.result_prec == 20);

  int compared = 0;
  for (std::size_t t = 0; t < 100; ++t) {
    Rng g = trial_rng(600, t);
    const PrecMatrix m = random_matrix(g, R, 8, 40);
    const PrecMatrix L = stable_l(m);
    const LiftResult lr = lift_recompute_l_auto(m);
    CHECK(lr.result_prec <= 40);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        const std::int64_t n = std::min(L(i, j).abs_prec(), lr.L(i, j).abs_prec());
        CHECK(agree_mod(L(i, j), lr.L(i, j), n));
      }
    ++compared;
  }
  CHECK(compared == 100);

  // a too-small lift reports the requirement
  bool reported = false;
  for (std::size_t t = 0; t < 50 && !reported; ++t) {
    Rng g = trial_rng(601, t);
    try {
      lift_recompute_l(random_matrix(g, R, 8, 40), 0);
    } catch (const InsufficientLift& e) {
      CHECK(e.required_precision() > 40);
      reported = true;
    }
  }
  CHECK(reported);
}

TEST_CASE("L'V' decomposition") {
  for (auto be : {Backend::padic, Backend::power_series}) {
    const Ring& R = Ring::get(be, 5);
    const LvOutput id = lv_decomposition(PrecMatrix::identity(R, 3, 10));
    const PrecMatrix I3 = PrecMatrix::identity(R, 3, 10);
    CHECK(id.Lp == I3);
    CHECK(id.Vp == I3);
    CHECK(id.Hp == I3);
    CHECK(id.Wp == I3);
    CHECK_FALSE(id.degenerate);

    const LvOutput ex = lv_decomposition(example(R, 10));
    // the columns were swapped at step (1,2)
    CHECK(ex.Wp(0, 0).is_big_oh());
    CHECK(ex.Wp(1, 0).is_unit_form());
    CHECK(ex.Hp(0, 1).is_big_oh());
    CHECK(ex.col_val[0] == Valuation{0, true});
    CHECK(ex.col_val[1] == Valuation{0, true});
  }
  const Ring& R = Ring::get(Backend::padic, 3);
  for (std::size_t t = 0; t < 1000; ++t) {
    Rng g = trial_rng(700, t);
    const std::int64_t N = 20;
    const PrecMatrix M = random_matrix(g, R, 6, N);
    const LvOutput lv = lv_decomposition(M);
    CHECK(agree_mod(lv.Lp, M * lv.Vp, N));
    CHECK(agree_mod(lv.Hp, M * lv.Wp, N));
    const PrecElem dw = determinant(lv.Wp);
    CHECK((dw.is_unit_form() && dw.valuation().value == 0));
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j) {
        CHECK(agree_mod(lv.Lp(i, j), PrecElem::zero(R, N), N));
        CHECK(agree_mod(lv.Hp(i, j), PrecElem::zero(R, N), N));
        CHECK(agree_mod(lv.Vp(j, i), PrecElem::zero(R, N), N));
      }
    if (lv.degenerate) continue;
    // both paths to L agree in value and precision
    CHECK(lv_to_l(lv) == stable_l(M));
  }
}

TEST_CASE("L'V' to L on identity and unswapped inputs") {
  const Ring& R = Ring::get(Backend::padic, 3);
  CHECK(lv_to_l(lv_decomposition(PrecMatrix::identity(R, 4, 10))) == PrecMatrix::identity(R, 4, 10));
  // no swaps and a unit upper V': nothing is lost
  const PrecMatrix M = PrecMatrix::from_integers(R, {{1, 0, 0}, {4, 1, 0}, {2, 5, 1}}, 20);
  CHECK(lv_to_l(lv_decomposition(M)) == M);
  LvOutput deg = lv_decomposition(PrecMatrix::from_integers(R, {{1, 1}, {1, 1}}, 10));
  CHECK(deg.degenerate);
  CHECK_THROWS_AS(lv_to_l(deg), DegenerateDecomposition);
}

TEST_CASE("Hermite extraction") {
  const Ring& R = Ring::get(Backend::padic, 5);
  LvOutput lv;
  lv.prec = 3;
  lv.Hp = PrecMatrix::from_integers(R, {{2, 0}, {1, 10}}, 3);
  const PrecMatrix H = hermite_from_lv(lv);
  CHECK(H(0, 0) == PrecElem::one(R, 3));
  CHECK(H(1, 1) == PrecElem::uniformizer_power(R, 1, 3));
  CHECK(H(1, 0) == PrecElem::from_integer(R, 63, 3));
  CHECK(H(0, 1).is_big_oh());

  CHECK(hermite_from_lv(lv_decomposition(PrecMatrix::identity(R, 3, 10))) ==
        PrecMatrix::identity(R, 3, 10));

  for (unsigned p : {2u, 3u, 5u}) {
    const Ring& Rp = Ring::get(Backend::padic, p);
    Rng g(800 + p);
    int done = 0;
    while (done < 100) {
      const std::size_t d = 1 + std::size_t(done % 4);
      const auto a = random_integers(g, d, 60);
      const auto exact = oracle::hermite(oracle::from_integers(a), p);
      if (!exact) continue;
      const PrecMatrix H2 = oracle::reduce_hermite(
          hermite_from_lv(lv_decomposition(PrecMatrix::from_integers(Rp, a, 40))));
      for (std::size_t i = 0; i < d; ++i) {
        CHECK(H2(i, i).valuation().value == exact->diag_val[i]);
        for (std::size_t j = 0; j <= i; ++j) CHECK(oracle::agrees(H2(i, j), exact->H[i][j]));
        for (std::size_t j = i + 1; j < d; ++j) CHECK(H2(i, j).is_big_oh());
      }
      ++done;
    }
  }
}

TEST_CASE("block L") {
  const Ring& R = Ring::get(Backend::padic, 2);
  Rng g0(900);
  const PrecMatrix m0 = random_matrix(g0, R, 5, 30);
  CHECK(block_l(m0, BlockType::single(5)) == PrecMatrix::identity(R, 5, 30));
  CHECK_THROWS_AS(block_l(m0, BlockType({2, 2})), InvalidArgument);

  int compared = 0;
  for (std::size_t t = 0; t < 500; ++t) {
    Rng g = trial_rng(901, t);
    const PrecMatrix m = random_matrix(g, R, 5, 40);
    PrecMatrix S, B;
    try {
      S = stable_l(m);
      B = block_l(m, BlockType::scalar(5));
    } catch (const PrecisionError&) {
      continue;
    }
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < i; ++j)
        CHECK(agree_mod(S(i, j), B(i, j), std::min(S(i, j).abs_prec(), B(i, j).abs_prec())));
    CHECK(block_l_unitlower(m, BlockType::scalar(5)) == B);
    ++compared;
  }
  CHECK(compared >= 490);

  const std::vector<BlockType> types{BlockType({2, 3}), BlockType({1, 3, 1}), BlockType({2, 2, 1}),
                                     BlockType::single(5)};
  for (std::size_t t = 0; t < 200; ++t) {
    Rng g = trial_rng(902, t);
    const PrecMatrix m = random_matrix(g, R, 5, 40);
    const BlockType& ty = types[t % types.size()];
    PrecMatrix B, U;
    try {
      B = block_l(m, ty);
      U = block_l_unitlower(m, ty);
    } catch (const PrecisionError&) {
      continue;
    }
    check_block_upper(B, m, ty, 10);
    check_block_upper(U, m, ty, 10);
    CHECK(is_unit_lower(U));
    // block L has identity diagonal blocks; the two differ only inside them
    for (std::size_t s = 0; s < ty.count(); ++s) {
      const std::size_t c0 = ty.boundary(s), c1 = ty.boundary(s + 1);
      for (std::size_t i = c0; i < c1; ++i)
        for (std::size_t j = c0; j < i; ++j) CHECK(B(i, j).is_big_oh());
    }
    const PrecMatrix Bu = inverse(U) * B;  // unit lower block diagonal
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        bool same_block = false;
        for (std::size_t s = 0; s < ty.count(); ++s)
          if (i >= ty.boundary(s) && i < ty.boundary(s + 1) && j >= ty.boundary(s)) same_block = true;
        if (!same_block) CHECK(Bu(i, j).is_big_oh());
      }
  }
}

TEST_CASE("precision failures are reported") {
  const Ring& R = Ring::get(Backend::padic, 3);
  const PrecMatrix m = PrecMatrix::from_integers(R, {{0, 0, 1}, {0, 0, 1}, {1, 1, 1}}, 5);
  CHECK_THROWS_AS(stable_l(m), DegenerateInput);
}
