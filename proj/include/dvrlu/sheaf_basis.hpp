#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dvrlu/lu_stable.hpp"
#include "dvrlu/poly.hpp"
#include "dvrlu/random.hpp"

namespace dvrlu {

struct LocalDatum {
  PrecElem a;                           // the point; P = X - a
  SeriesMatrix M;                       // local matrix in X_m = X - a
  std::vector<std::int64_t> exponents;  // e_1 <= ... <= e_d
};

struct GlobalBasis {
  PolyMatrix M;
  std::vector<Poly> D;
  std::vector<BlockType> block_types;
  PrecMatrix omega, omega_inv;
  PolyMatrix L;              // unit lower triangular, M = omega^-1 L
  std::int64_t v = 0;        // certificate bound used for the draw
  std::int64_t w = 0;        // input denominator parameter
  std::int64_t prec = 0;     // input precision N
  int tries = 1;
};

BlockType block_type_from_exponents(const std::vector<std::int64_t>& e);
std::vector<Poly> build_D(const std::vector<LocalDatum>& data);

// Smallest w >= 0 with v(coefficient k) >= -k w for every local entry.
std::int64_t denominator_parameter(const std::vector<LocalDatum>& data);

// Unit lower triangular L with A = L U, U block upper triangular of the
// given type, for a series matrix whose constant term admits that
// factorization. Coefficient k of L is capped at N - 2v - k(v + w).
SeriesMatrix series_block_l_unitlower(const SeriesMatrix& A, const BlockType& type,
                                      std::int64_t w);

// Unit lower triangular polynomial matrix matching each L_list[m] modulo
// (X - a_m)^order(L_list[m]).
PolyMatrix crt_unit_lower(const std::vector<SeriesMatrix>& L_list,
                          const std::vector<PrecElem>& points);

SeriesMatrix taylor_shift(const PolyMatrix& m, const PrecElem& a, std::size_t order);
SeriesMatrix constant_part(const SeriesMatrix& m);
PrecMatrix constant_matrix(const SeriesMatrix& m);
SeriesMatrix operator*(const PrecMatrix& a, const SeriesMatrix& b);
SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b);
PolyMatrix operator*(const PrecMatrix& a, const PolyMatrix& b);

struct SheafOptions {
  double eps = 0.5;
  int max_tries = 64;
};

GlobalBasis solve_sheaf(const std::vector<LocalDatum>& data, Rng& rng,
                        const SheafOptions& opts = {});
// One attempt with a given preconditioner; nullopt when omega is unsuitable.
std::optional<GlobalBasis> solve_sheaf_with(const std::vector<LocalDatum>& data,
                                            const PrecMatrix& omega, const SheafOptions& opts = {});

struct VerificationReport {
  bool congruence = false;           // transition matrix block upper, unit diagonal blocks
  std::int64_t congruence_margin = 0;  // digits to which the vanishing entries are certified
  bool det_constant = false;
  PrecElem det_value;
  bool divisibility = false;
  bool exponents = false;
  std::string detail;

  bool all() const { return congruence && det_constant && divisibility && exponents; }
};

VerificationReport verify_local_equivalence(const GlobalBasis& basis, const LocalDatum& datum);

}  // namespace dvrlu
