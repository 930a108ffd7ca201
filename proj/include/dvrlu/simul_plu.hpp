#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dvrlu/lu_stable.hpp"
#include "dvrlu/random.hpp"

namespace dvrlu {

// BASE uses q - 1 in the denominator, PI uses Pi(q).
enum class BoundVariant { base, pi };

std::int64_t required_v(std::uint32_t q, const std::vector<std::size_t>& r_list, double eps,
                        BoundVariant variant = BoundVariant::base);

struct FamilyMember {
  PrecMatrix M;
  BlockType type;
};

struct SimulInstance {
  std::vector<FamilyMember> family;
  double eps = 0.5;
  BoundVariant variant = BoundVariant::base;
  std::optional<std::int64_t> v_override;

  std::size_t dim() const;
  std::int64_t v() const;  // v_override or required_v over the block counts
};

struct Certificate {
  Valuation min_valuation;     // smallest entry valuation
  std::int64_t min_precision;  // smallest absolute precision of an entry
};

struct SimulResult {
  PrecMatrix omega, omega_inv;
  std::vector<PrecMatrix> L;  // L_{d_m}(omega M_m)
  std::vector<Certificate> certificates;
  Certificate inverse_certificate;
  std::int64_t v = 0;
  std::int64_t prec = 0;
  int tries = 1;
};

struct SimulFailure {
  enum class Reason { singular_omega, large_det, precision, large_minor, large_entries };
  Reason reason;
  std::size_t matrix = 0;  // index into the family (when relevant)
  std::size_t block = 0;   // 1-based block boundary s (when relevant)
  std::string message;
};

std::string reason_name(SimulFailure::Reason r);

struct SimulOutcome {
  std::optional<SimulResult> result;
  std::optional<SimulFailure> failure;
  bool ok() const { return result.has_value(); }
};

// One draw of the preconditioner omega at precision N.
SimulOutcome simultaneous_block_lu(const SimulInstance& inst, Rng& rng, std::int64_t N);
// Same, with a given omega.
SimulOutcome simultaneous_block_lu_with(const SimulInstance& inst, const PrecMatrix& omega);

SimulResult retry_until_success(const SimulInstance& inst, Rng& rng, std::int64_t N,
                                int max_tries);

// Valuations W_1..W_j of the diagonal after row-by-row elimination of the
// leading j x j block of A, choosing at each row the first column of minimal
// valuation.
std::vector<Valuation> row_pivot_valuations(const PrecMatrix& A, std::size_t j);

}  // namespace dvrlu
