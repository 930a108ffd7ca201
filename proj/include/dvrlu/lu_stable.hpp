#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dvrlu/matrix.hpp"

namespace dvrlu {

// Partition (d_1, ..., d_r) of d describing a block LU shape.
class BlockType {
 public:
  BlockType() = default;
  explicit BlockType(std::vector<std::size_t> parts);
  static BlockType scalar(std::size_t d) { return BlockType(std::vector<std::size_t>(d, 1)); }
  static BlockType single(std::size_t d) { return BlockType({d}); }

  const std::vector<std::size_t>& parts() const { return parts_; }
  std::size_t count() const { return parts_.size(); }
  std::size_t dim() const;
  // j(s) = d_1 + ... + d_s for 1 <= s <= r; boundary(0) = 0.
  std::size_t boundary(std::size_t s) const;

  bool operator==(const BlockType&) const = default;

 private:
  std::vector<std::size_t> parts_;
};

struct LvOutput {
  PrecMatrix Lp, Vp, Hp, Wp;
  std::vector<Valuation> col_val;  // v(H'_jj)
  bool degenerate = false;
  std::int64_t prec = 0;  // working precision N

  bool operator==(const LvOutput&) const = default;
};

struct ValuationProfile {
  std::size_t d = 0;
  // vij[i][j] for i <= j (0-based); entries below the diagonal are unused.
  std::vector<std::vector<Valuation>> vij;
  std::vector<Valuation> diag;
  Valuation vmax;
  Valuation det_val;

  const Valuation& at(std::size_t i, std::size_t j) const { return vij[i][j]; }
};

ValuationProfile vij_statistics(const PrecMatrix& omega);
// Sum_{i<=j} min(V_{i,i..j}): valuation of the j-th leading principal minor
// (j is 1-based). Exact flag false if any term is undetermined.
Valuation minor_valuation(const ValuationProfile& prof, std::size_t j);
// V_{d,s} = valuation of det of the s-th diagonal block after elimination.
std::vector<Valuation> block_valuations(const ValuationProfile& prof, const BlockType& type);

PrecMatrix naive_gauss_l(const PrecMatrix& M);
PrecMatrix stable_l(const PrecMatrix& M);

struct LiftResult {
  PrecMatrix L;
  std::int64_t lifted_prec = 0;  // N'
  std::int64_t result_prec = 0;  // N - 2W
  int attempts = 1;
};
std::int64_t default_lift_extra(std::size_t d, std::uint32_t q);
LiftResult lift_recompute_l(const PrecMatrix& M, std::int64_t n_extra);
// Starts at default_lift_extra and retries with the reported requirement.
LiftResult lift_recompute_l_auto(const PrecMatrix& M, int max_attempts = 16);

LvOutput lv_decomposition(const PrecMatrix& M);
PrecMatrix lv_to_l(const LvOutput& lv);
PrecMatrix hermite_from_lv(const LvOutput& lv);

PrecMatrix block_l(const PrecMatrix& M, const BlockType& type);
PrecMatrix block_l_unitlower(const PrecMatrix& M, const BlockType& type);

// V_L = -min valuation of the entries of L, as an interval [lo, hi] when some
// entry's valuation is only bounded.
struct VlValue {
  std::int64_t lo = 0, hi = 0;
  bool exact() const { return lo == hi; }
};
VlValue vl_of(const PrecMatrix& L);

// N minus the smallest absolute precision of a strictly lower entry.
std::int64_t precision_loss(const PrecMatrix& L, std::int64_t N);

}  // namespace dvrlu
