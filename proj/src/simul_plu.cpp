#include "dvrlu/simul_plu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dvrlu/error.hpp"
#include "dvrlu/stats.hpp"
#include "elimination.hpp"

namespace dvrlu {

std::int64_t required_v(std::uint32_t q, const std::vector<std::size_t>& r_list, double eps,
                        BoundVariant variant) {
  if (q < 2) throw InvalidArgument("q must be at least 2");
  if (!(eps > 0 && eps < 1)) throw InvalidArgument("eps must lie in (0,1)");
  if (r_list.empty()) throw InvalidArgument("need at least one block type");
  double r = 0;
  for (auto x : r_list) r += double(x);
  const double denom = variant == BoundVariant::base ? double(q - 1) : pi_q(q);
  const double lq = std::log(double(q));
  const double x = std::log(r / denom) / lq - std::log(eps) / lq;
  return std::max<std::int64_t>(0, std::int64_t(std::ceil(x - 1e-9)));
}

std::size_t SimulInstance::dim() const {
  if (family.empty()) throw InvalidArgument("empty family");
  return family.front().M.rows();
}

std::int64_t SimulInstance::v() const {
  if (v_override) return *v_override;
  if (family.empty()) throw InvalidArgument("empty family");
  std::vector<std::size_t> r;
  for (const auto& f : family) r.push_back(f.type.count());
  return required_v(family.front().M.ring().p(), r, eps, variant);
}

std::string reason_name(SimulFailure::Reason r) {
  switch (r) {
    case SimulFailure::Reason::singular_omega: return "singular_omega";
    case SimulFailure::Reason::large_det: return "large_det";
    case SimulFailure::Reason::precision: return "precision";
    case SimulFailure::Reason::large_minor: return "large_minor";
    case SimulFailure::Reason::large_entries: return "large_entries";
  }
  return "unknown";
}

namespace {

void check_instance(const SimulInstance& inst) {
  const std::size_t d = inst.dim();
  for (const auto& f : inst.family) {
    if (!f.M.square() || f.M.rows() != d) throw InvalidArgument("family matrices must share size");
    if (f.type.dim() != d) throw InvalidArgument("block type does not match matrix size");
  }
}

Certificate certify(const PrecMatrix& m) {
  return {m.min_valuation(), m.min_abs_prec()};
}

SimulOutcome fail(SimulFailure::Reason r, std::size_t m, std::size_t s, std::string msg) {
  SimulOutcome o;
  o.failure = SimulFailure{r, m, s, std::move(msg)};
  return o;
}

}  // namespace

SimulOutcome simultaneous_block_lu_with(const SimulInstance& inst, const PrecMatrix& omega) {
  check_instance(inst);
  using R = SimulFailure::Reason;
  const std::int64_t v = inst.v();
  const std::size_t d = inst.dim();
  if (!omega.square() || omega.rows() != d) throw InvalidArgument("omega has the wrong size");
  std::int64_t N = omega.min_abs_prec();
  for (const auto& f : inst.family) N = std::min(N, f.M.min_abs_prec());

  ValuationProfile prof;
  try {
    prof = vij_statistics(omega.truncated(N));
  } catch (const PrecisionError& e) {
    return fail(R::singular_omega, 0, 0, e.what());
  }
  if (!prof.det_val.exact) return fail(R::singular_omega, 0, 0, "det(omega) is O(pi^N)");
  if (prof.det_val.value > v)
    return fail(R::large_det, 0, 0, "v(det omega) = " + std::to_string(prof.det_val.value));

  SimulResult res;
  res.v = v;
  res.prec = N;
  res.omega = omega.truncated(N);
  try {
    res.omega_inv = inverse(res.omega);
  } catch (const PrecisionError& e) {
    return fail(R::singular_omega, 0, 0, e.what());
  }
  res.inverse_certificate = certify(res.omega_inv);
  if (res.inverse_certificate.min_valuation.value < -v)
    return fail(R::large_entries, 0, 0, "omega^-1 has an entry of valuation below -v");

  for (std::size_t m = 0; m < inst.family.size(); ++m) {
    const auto& f = inst.family[m];
    const PrecMatrix A = (res.omega * f.M).truncated(N);
    try {
      const ValuationProfile pm = vij_statistics(A);
      for (std::size_t s = 1; s < f.type.count(); ++s) {
        const Valuation mv = minor_valuation(pm, f.type.boundary(s));
        if (!mv.exact) return fail(R::precision, m, s, "block minor is O(pi^N)");
        if (mv.value > v)
          return fail(R::large_minor, m, s, "block minor valuation " + std::to_string(mv.value));
      }
      res.L.push_back(block_l(A, f.type));
    } catch (const PrecisionError& e) {
      return fail(R::precision, m, 0, e.what());
    }
    res.certificates.push_back(certify(res.L.back()));
    if (res.certificates.back().min_valuation.value < -v)
      return fail(R::large_entries, m, 0, "L has an entry of valuation below -v");
  }
  SimulOutcome o;
  o.result = std::move(res);
  return o;
}

SimulOutcome simultaneous_block_lu(const SimulInstance& inst, Rng& rng, std::int64_t N) {
  check_instance(inst);
  const PrecMatrix omega = random_matrix(rng, inst.family.front().M.ring(), inst.dim(), N);
  return simultaneous_block_lu_with(inst, omega);
}

SimulResult retry_until_success(const SimulInstance& inst, Rng& rng, std::int64_t N,
                                int max_tries) {
  if (max_tries < 1) throw InvalidArgument("max_tries must be positive");
  for (int t = 1; t <= max_tries; ++t) {
    SimulOutcome o = simultaneous_block_lu(inst, rng, N);
    if (o.ok()) {
      o.result->tries = t;
      return std::move(*o.result);
    }
  }
  throw ExhaustedRetries("no suitable preconditioner after " + std::to_string(max_tries) +
                         " tries");
}

std::vector<Valuation> row_pivot_valuations(const PrecMatrix& A, std::size_t j) {
  if (j > A.rows() || j > A.cols()) throw InvalidArgument("leading block larger than matrix");
  std::int64_t N = 0;
  PrecMatrix w = detail::prepare_input(A.block(0, 0, j, j), N);
  std::vector<Valuation> out;
  for (std::size_t i = 0; i < j; ++i) {
    std::size_t best = j;
    std::int64_t best_val = std::numeric_limits<std::int64_t>::max(), bound = best_val;
    for (std::size_t c = i; c < j; ++c) {
      const Valuation v = w(i, c).valuation();
      if (!v.exact)
        bound = std::min(bound, v.value);
      else if (v.value < best_val) {
        best_val = v.value;
        best = c;
      }
    }
    if (best == j) {
      out.push_back({bound, false});
      continue;
    }
    if (bound < best_val) throw AmbiguousValuation(i, best);
    w.swap_columns(i, best);
    for (std::size_t c = i + 1; c < j; ++c) detail::eliminate(w, nullptr, i, i, c, N);
    out.push_back(w(i, i).valuation());
  }
  return out;
}

}  // namespace dvrlu
