#include <algorithm>
#include <vector>

#include "doctest.h"
#include "dvrlu/error.hpp"
#include "dvrlu/sheaf_basis.hpp"
#include "dvrlu/simul_plu.hpp"
#include "support.hpp"

using namespace dvrlu;
using testsupport::I;

namespace {

SeriesMatrix identity_series(const Ring& R, std::size_t d, std::size_t order, std::int64_t N) {
  SeriesMatrix m(d, d, Series::zero(R, order, N));
  for (std::size_t i = 0; i < d; ++i) m(i, i) = Series::constant(PrecElem::one(R, N), order);
  return m;
}

void check_all_pass(const GlobalBasis& b, const std::vector<LocalDatum>& data) {
  for (const auto& dt : data) {
    const VerificationReport r = verify_local_equivalence(b, dt);
    INFO(r.detail);
    CHECK(r.congruence);
    CHECK(r.det_constant);
    CHECK(r.divisibility);
    CHECK(r.exponents);
    CHECK(r.det_value.is_unit_form());
  }
}

}  // namespace

TEST_CASE("trivial instances") {
  for (auto be : {Backend::padic, Backend::power_series}) {
    const Ring& R = Ring::get(be, 5);
    const std::int64_t N = 30;
    Rng g(1);
    {
      const std::vector<LocalDatum> data{{I(R, 0, N), identity_series(R, 3, 1, N), {0, 0, 0}}};
      const GlobalBasis b = solve_sheaf(data, g);
      for (const Poly& D : b.D) {
        REQUIRE(D.size() >= 1);
        CHECK(agree_mod(D.c[0], PrecElem::one(R, N), N));
        for (std::size_t k = 1; k < D.size(); ++k) CHECK(D.c[k].is_big_oh());
      }
      check_all_pass(b, data);
    }
    {
      const std::vector<LocalDatum> data{{I(R, 0, N), identity_series(R, 2, 2, N), {0, 1}}};
      const GlobalBasis b = solve_sheaf(data, g);
      REQUIRE(b.D.size() == 2);
      CHECK(agree_mod(b.D[0].c[0], PrecElem::one(R, N), N));
      REQUIRE(b.D[1].size() == 2);
      CHECK(b.D[1].c[0].is_big_oh());
      CHECK(agree_mod(b.D[1].c[1], PrecElem::one(R, N), N));
      check_all_pass(b, data);
    }
  }
}

TEST_CASE("the reference random instance") {
  for (auto be : {Backend::padic, Backend::power_series}) {
    const Ring& R = Ring::get(be, 5);
    const std::int64_t N = 30;
    Rng g(2);
    const std::vector<LocalDatum> data{
        {I(R, 0, N), testsupport::random_series_matrix(g, R, 3, 2, N), {0, 1, 1}},
        {I(R, 1, N), testsupport::random_series_matrix(g, R, 3, 3, N), {0, 0, 2}}};
    const GlobalBasis b = solve_sheaf(data, g);
    check_all_pass(b, data);
    CHECK(b.block_types[0] == BlockType({1, 2}));
    CHECK(b.block_types[1] == BlockType({2, 1}));

    // perturbing one coefficient of M by a unit is detected
    GlobalBasis bad = b;
    bad.M(2, 0).c[0] += PrecElem::one(R, N);
    bool caught = false;
    for (const auto& dt : data) caught = caught || !verify_local_equivalence(bad, dt).congruence;
    CHECK(caught);
  }
}

TEST_CASE("invalid inputs") {
  const Ring& R = Ring::get(Backend::padic, 5);
  const std::int64_t N = 20;
  Rng g(3);
  const SeriesMatrix m = identity_series(R, 2, 2, N);
  CHECK_THROWS_AS(solve_sheaf({{I(R, 0, N), m, {0, 1}}, {I(R, 0, N), m, {0, 1}}}, g), CoincidentPoints);
  CHECK_THROWS_AS(solve_sheaf({{I(R, 0, N), m, {1, 0}}}, g), NotSorted);
  // truncation order below e_d + 1
  CHECK_THROWS_AS(solve_sheaf({{I(R, 0, N), m, {0, 3}}}, g), InvalidArgument);
  SeriesMatrix sing = m;
  sing(1, 1) = Series::zero(R, 2, N);
  CHECK_THROWS_AS(solve_sheaf({{I(R, 0, N), sing, {0, 1}}}, g), InvalidArgument);
}

TEST_CASE("local block LU lifts to every truncation order") {
  const Ring& R = Ring::get(Backend::padic, 5);
  const std::int64_t N = 40;
  for (std::size_t order = 1; order <= 5; ++order)
    for (std::size_t t = 0; t < 20; ++t) {
      Rng g = trial_rng(40 + order, t);
      const SeriesMatrix A = testsupport::random_series_matrix(g, R, 3, order, N);
      const BlockType ty = t % 2 ? BlockType({1, 2}) : BlockType::scalar(3);
      // make every relevant leading minor of A(0) a unit
      const PrecMatrix A0 = constant_matrix(A);
      const ValuationProfile pr = vij_statistics(A0);
      bool units = true;
      for (std::size_t s = 1; s < ty.count(); ++s) units = units && minor_valuation(pr, ty.boundary(s)).value == 0;
      if (!units) continue;
      const SeriesMatrix L = series_block_l_unitlower(A, ty, 0);
      // L^-1 A is block upper triangular as a truncated series matrix
      SeriesMatrix Linv(3, 3, Series::zero(R, order, N));
      for (std::size_t i = 0; i < 3; ++i) {
        Linv(i, i) = Series::constant(PrecElem::one(R, N), order);
        for (std::size_t j = 0; j < i; ++j) {
          Series acc = Series::zero(R, order, N);
          for (std::size_t k = j; k < i; ++k) acc = acc - L(i, k) * Linv(k, j);
          Linv(i, j) = acc;
        }
      }
      const SeriesMatrix U = Linv * A;
      for (std::size_t s = 0; s < ty.count(); ++s)
        for (std::size_t j = ty.boundary(s); j < ty.boundary(s + 1); ++j)
          for (std::size_t i = ty.boundary(s + 1); i < 3; ++i)
            for (const PrecElem& c : U(i, j).c) CHECK(c.is_big_oh());
    }
}

TEST_CASE("precision of the global factor") {
  // recompute at twice the precision and compare canonical local factors
  for (std::int64_t w : {0, 1, 2}) {
    const Ring& R = Ring::get(Backend::padic, 5);
    const std::int64_t N = 40;
    int compared = 0;
    for (std::size_t t = 0; t < 40; ++t) {
      Rng g = trial_rng(60 + std::uint64_t(w), t);
      std::uniform_int_distribution<int> E(0, 3);
      std::vector<std::int64_t> e(3);
      for (auto& x : e) x = E(g);
      std::sort(e.begin(), e.end());
      const SeriesMatrix M = testsupport::random_series_matrix(g, R, 3, std::size_t(e.back() + 1), N, w);
      const BlockType ty = block_type_from_exponents(e);
      const PrecMatrix omega = random_matrix(g, R, 3, N);
      SimulInstance inst;
      inst.variant = BoundVariant::pi;
      inst.family.push_back({constant_matrix(M), ty});
      if (!simultaneous_block_lu_with(inst, omega).ok()) continue;
      const std::int64_t v = inst.v();
      const std::int64_t wp = denominator_parameter({{I(R, 0, N), M, e}});
      CHECK(wp <= w);
      SeriesMatrix Mh = M;
      for (auto& s : Mh.data) s = s.lifted(2 * N);
      const SeriesMatrix L1 = series_block_l_unitlower(omega * M, ty, wp);
      const SeriesMatrix L2 = series_block_l_unitlower(omega.lifted(2 * N) * Mh, ty, wp);
      const SeriesMatrix C1 = testsupport::canonical_l(L1, ty), C2 = testsupport::canonical_l(L2, ty);
      for (std::size_t i = 0; i < L1.data.size(); ++i)
        for (std::size_t k = 0; k < L1.data[i].c.size(); ++k) {
          CHECK(L1.data[i].c[k].abs_prec() >= N - 2 * v - std::int64_t(k) * (v + wp));
          CHECK(agree_mod(C1.data[i].c[k], C2.data[i].c[k], C1.data[i].c[k].abs_prec()));
        }
      ++compared;
    }
    CHECK(compared >= 20);
  }
}

TEST_CASE("end to end on random instances") {
  for (auto be : {Backend::padic, Backend::power_series}) {
    const Ring& R = Ring::get(be, 5);
    const std::int64_t N = 40;
    int tries = 0;
    for (std::size_t t = 0; t < 15; ++t) {
      Rng g = trial_rng(70, t);
      const auto data = testsupport::random_sheaf_instance(g, R, 3, 3, N);
      const GlobalBasis b = solve_sheaf(data, g);
      tries += b.tries;
      check_all_pass(b, data);
      // divisibility chain and degrees of D
      std::int64_t deg = 0;
      for (const auto& dt : data) deg += dt.exponents.back();
      CHECK(std::int64_t(b.D.back().size()) - 1 == deg);
      // end-to-end precision bound on L
      std::int64_t e = 0;
      for (const auto& dt : data) e = std::max(e, dt.exponents.back());
      for (const Poly& p : b.L.data)
        for (const PrecElem& c : p.c) CHECK(c.abs_prec() >= N - 2 * b.v - e * (b.v + b.w));
    }
    CHECK(tries <= 2 * 15);
  }
}
