#include "dvrlu/lu_stable.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "dvrlu/error.hpp"
#include "elimination.hpp"

namespace dvrlu {

using detail::eliminate;
using detail::prepare_input;

BlockType::BlockType(std::vector<std::size_t> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw InvalidArgument("block type needs at least one part");
  for (auto p : parts_)
    if (p == 0) throw InvalidArgument("block sizes must be positive");
}

std::size_t BlockType::dim() const { return std::accumulate(parts_.begin(), parts_.end(), std::size_t{0}); }

std::size_t BlockType::boundary(std::size_t s) const {
  std::size_t j = 0;
  for (std::size_t k = 0; k < s; ++k) j += parts_.at(k);
  return j;
}

namespace {

Valuation min_val(const Valuation& a, const Valuation& b) {
  if (a.value < b.value) return a;
  if (b.value < a.value) return b;
  return {a.value, a.exact && b.exact};
}

Valuation add_val(const Valuation& a, const Valuation& b) {
  return {a.value + b.value, a.exact && b.exact};
}

// Sum of v(w(k,k)) for k < j; throws DegenerateInput on an unknown pivot.
std::int64_t pivot_sum(const PrecMatrix& w, std::size_t j, std::size_t skip_unknown_from) {
  std::int64_t v = 0;
  for (std::size_t k = 0; k < j; ++k) {
    const PrecElem& e = w(k, k);
    if (e.is_big_oh()) {
      if (k >= skip_unknown_from) continue;
      throw DegenerateInput("pivot " + std::to_string(k + 1) +
                            " is indistinguishable from zero at this precision");
    }
    v += e.valuation().value;
  }
  return v;
}

}  // namespace

ValuationProfile vij_statistics(const PrecMatrix& omega) {
  std::int64_t N = 0;
  PrecMatrix w = prepare_input(omega, N);
  const std::size_t d = w.rows();
  ValuationProfile prof;
  prof.d = d;
  prof.vij.assign(d, std::vector<Valuation>(d));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      prof.vij[i][j] = w(i, j).valuation();
      eliminate(w, nullptr, i, i, j, N);
    }
    prof.vij[j][j] = w(j, j).valuation();
  }
  prof.diag.resize(d);
  prof.vmax = prof.vij[0][0];
  for (std::size_t i = 0; i < d; ++i) {
    prof.diag[i] = prof.vij[i][i];
    if (prof.diag[i].value > prof.vmax.value ||
        (prof.diag[i].value == prof.vmax.value && !prof.diag[i].exact))
      prof.vmax = prof.diag[i];
  }
  prof.det_val = minor_valuation(prof, d);
  return prof;
}

Valuation minor_valuation(const ValuationProfile& prof, std::size_t j) {
  Valuation total{0, true};
  for (std::size_t i = 0; i < j; ++i) {
    Valuation m = prof.vij[i][i];
    for (std::size_t k = i + 1; k < j; ++k) m = min_val(m, prof.vij[i][k]);
    total = add_val(total, m);
  }
  return total;
}

std::vector<Valuation> block_valuations(const ValuationProfile& prof, const BlockType& type) {
  if (type.dim() != prof.d) throw InvalidArgument("block type does not match dimension");
  std::vector<Valuation> out;
  std::size_t j0 = 0;
  for (std::size_t s = 0; s < type.count(); ++s) {
    const std::size_t j1 = j0 + type.parts()[s];
    Valuation total{0, true};
    for (std::size_t i = j0; i < j1; ++i) {
      Valuation m = prof.vij[i][i];
      for (std::size_t k = i + 1; k < j1; ++k) m = min_val(m, prof.vij[i][k]);
      total = add_val(total, m);
    }
    out.push_back(total);
    j0 = j1;
  }
  return out;
}

PrecMatrix naive_gauss_l(const PrecMatrix& M) {
  if (!M.square() || M.empty()) throw InvalidArgument("expected a non-empty square matrix");
  const std::size_t d = M.rows();
  const Ring& ring = M.ring();
  const std::int64_t N = M.min_abs_prec();
  PrecMatrix u = M;
  PrecMatrix L = PrecMatrix::identity(ring, d, N);
  for (std::size_t k = 0; k + 1 < d; ++k) {
    const PrecElem piv = u(k, k);
    if (piv.is_big_oh()) throw DivisionByUnknownZero();
    for (std::size_t i = k + 1; i < d; ++i) {
      const PrecElem m = u(i, k) / piv;
      L(i, k) = m;
      for (std::size_t c = k + 1; c < d; ++c) u(i, c) -= m * u(k, c);
    }
  }
  return L;
}

PrecMatrix stable_l(const PrecMatrix& M) {
  std::int64_t N = 0;
  PrecMatrix w = prepare_input(M, N);
  const std::size_t d = w.rows();
  const Ring& ring = w.ring();
  PrecMatrix L = PrecMatrix::identity(ring, d, N);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < j; ++i) eliminate(w, nullptr, i, i, j, N);
    if (j + 1 == d) break;
    const std::int64_t v = pivot_sum(w, j + 1, d);
    const PrecElem& piv = w(j, j);
    const std::int64_t vjj = piv.valuation().value;
    for (std::size_t i = j + 1; i < d; ++i) {
      const PrecElem q = w(i, j) / piv;
      const std::int64_t wv = w(i, j).valuation().value - vjj;
      L(i, j) = q.truncated(N - v + std::min<std::int64_t>(0, wv));
    }
  }
  return L;
}

std::int64_t default_lift_extra(std::size_t d, std::uint32_t q) {
  return static_cast<std::int64_t>((2 * d + q - 1) / q);
}

LiftResult lift_recompute_l(const PrecMatrix& M, std::int64_t n_extra) {
  std::int64_t N = 0;
  PrecMatrix base = prepare_input(M, N);
  const std::size_t d = base.rows();
  const Ring& ring = base.ring();
  const std::int64_t Np = N + std::max<std::int64_t>(0, n_extra);
  PrecMatrix u = base.lifted(Np);
  PrecMatrix L = PrecMatrix::identity(ring, d, N);
  // W_i = valuation of the i-th leading minor = running sum of pivot valuations
  std::int64_t running = 0, sum_w = 0, max_w = 0;
  for (std::size_t k = 0; k < d; ++k) {
    const PrecElem piv = u(k, k);
    if (piv.is_big_oh()) throw InsufficientLift(2 * Np - N + static_cast<std::int64_t>(d));
    running += piv.valuation().value;
    sum_w += running;
    max_w = std::max(max_w, running);
    for (std::size_t i = k + 1; i < d; ++i) {
      const PrecElem m = u(i, k) / piv;
      L(i, k) = m;
      for (std::size_t c = k + 1; c < d; ++c) u(i, c) -= m * u(k, c);
    }
  }
  if (max_w >= N) throw InsufficientLift(Np + max_w);
  const std::int64_t required = N + 2 * (sum_w - max_w);
  if (Np < required) throw InsufficientLift(required);
  const std::int64_t target = N - 2 * max_w;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = j + 1; i < d; ++i) {
      if (L(i, j).abs_prec() < target) throw InsufficientLift(Np + (target - L(i, j).abs_prec()));
      L(i, j) = L(i, j).truncated(target);
    }
  return {std::move(L), Np, target, 1};
}

LiftResult lift_recompute_l_auto(const PrecMatrix& M, int max_attempts) {
  std::int64_t N = M.min_abs_prec();
  std::int64_t extra = default_lift_extra(M.rows(), M.ring().p());
  for (int a = 1; a <= max_attempts; ++a) {
    try {
      LiftResult r = lift_recompute_l(M, extra);
      r.attempts = a;
      return r;
    } catch (const InsufficientLift& e) {
      extra = std::max(e.required_precision() - N, 2 * extra + 1);
    }
  }
  throw ExhaustedRetries("lift_recompute_l: no sufficient lift found");
}

LvOutput lv_decomposition(const PrecMatrix& M) {
  std::int64_t N = 0;
  PrecMatrix w = prepare_input(M, N);
  const std::size_t d = w.rows();
  const Ring& ring = w.ring();
  PrecMatrix t = PrecMatrix::identity(ring, d, N);
  LvOutput out;
  out.prec = N;
  out.Lp = PrecMatrix(ring, d, d, N);
  out.Vp = PrecMatrix(ring, d, d, N);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < j; ++i) eliminate(w, &t, i, i, j, N);
    for (std::size_t r = 0; r < d; ++r) {
      out.Lp(r, j) = w(r, j);
      out.Vp(r, j) = t(r, j);
    }
  }
  out.Hp = std::move(w);
  out.Wp = std::move(t);
  for (std::size_t j = 0; j < d; ++j) {
    out.col_val.push_back(out.Hp(j, j).valuation());
    if (out.Lp(j, j).is_big_oh()) out.degenerate = true;
  }
  return out;
}

PrecMatrix lv_to_l(const LvOutput& lv) {
  if (lv.degenerate) throw DegenerateDecomposition("L'V' decomposition is degenerate");
  const PrecMatrix& Lp = lv.Lp;
  const std::size_t d = Lp.rows();
  const std::int64_t N = lv.prec;
  PrecMatrix L = PrecMatrix::identity(Lp.ring(), d, N);
  std::int64_t v = 0;
  for (std::size_t j = 0; j < d; ++j) {
    const PrecElem& ljj = Lp(j, j);
    const PrecElem& vjj = lv.Vp(j, j);
    if (ljj.is_big_oh() || vjj.is_big_oh())
      throw DegenerateDecomposition("diagonal entry indistinguishable from zero");
    // v(delta_j) = sum_{k<=j} v(L'_kk) - v(V'_kk)
    v += ljj.valuation().value - vjj.valuation().value;
    for (std::size_t i = j + 1; i < d; ++i) {
      const PrecElem q = Lp(i, j) / ljj;
      const std::int64_t wv = Lp(i, j).valuation().value - ljj.valuation().value;
      L(i, j) = q.truncated(N - v + std::min<std::int64_t>(0, wv));
    }
  }
  return L;
}

PrecMatrix hermite_from_lv(const LvOutput& lv) {
  const PrecMatrix& Hp = lv.Hp;
  const std::size_t d = Hp.rows();
  const Ring& ring = Hp.ring();
  const std::int64_t N = lv.prec;
  PrecMatrix H(ring, d, d, N);
  for (std::size_t j = 0; j < d; ++j) {
    const PrecElem& h = Hp(j, j);
    if (h.is_big_oh()) throw DegenerateDecomposition("H' has a diagonal entry O(pi^N)");
    const std::int64_t vj = h.valuation().value;
    const PrecElem u = h / PrecElem::uniformizer_power(ring, vj, vj + h.rel_prec());
    H(j, j) = PrecElem::uniformizer_power(ring, vj, N);
    for (std::size_t i = j + 1; i < d; ++i) H(i, j) = (Hp(i, j) / u).truncated(N - vj);
  }
  return H;
}

namespace {

PrecMatrix block_l_impl(const PrecMatrix& M, const BlockType& type, bool clear) {
  std::int64_t N = 0;
  PrecMatrix w = prepare_input(M, N);
  const std::size_t d = w.rows();
  const Ring& ring = w.ring();
  if (type.dim() != d) throw InvalidArgument("block type does not match matrix size");
  PrecMatrix L = PrecMatrix::identity(ring, d, N);
  std::size_t j0 = 0;
  for (std::size_t s = 0; s < type.count(); ++s) {
    const std::size_t j1 = j0 + type.parts()[s];
    for (std::size_t j = j0; j < j1; ++j)
      for (std::size_t i = 0; i < j; ++i) eliminate(w, nullptr, i, i, j, N);
    const bool last = s + 1 == type.count();
    if (last && clear) break;
    // v = valuation of the j1-th leading minor; the final pivot of the matrix
    // is never divided by, so it may stay unknown.
    const std::int64_t v = pivot_sum(w, j1, d - 1);
    const std::int64_t cap = N - 2 * v;
    std::int64_t extra = clear ? 2 * v + 2 : 0;
    for (int attempt = 0;; ++attempt) {
      const std::int64_t Np = N + extra;
      // normalized block columns on rows j0..d-1
      std::vector<std::vector<PrecElem>> y(j1 - j0);
      for (std::size_t c = j0; c < j1; ++c) {
        auto& col = y[c - j0];
        col.resize(d);
        if (c + 1 == d) break;
        const PrecElem piv = w(c, c).lifted(Np);
        for (std::size_t r = c + 1; r < d; ++r) col[r] = w(r, c).lifted(Np) / piv;
      }
      if (clear) {
        // y_c <- y_c - sum_{c < i < j1} y_c[i] * y_i, with y_i already cleared
        for (std::size_t c = j1; c-- > j0;)
          for (std::size_t i = c + 1; i < j1; ++i) {
            const PrecElem f = y[c - j0][i];
            for (std::size_t r = j1; r < d; ++r) y[c - j0][r] -= f * y[i - j0][r];
          }
      }
      bool ok = true;
      for (std::size_t c = j0; c < j1 && ok; ++c)
        for (std::size_t r = clear ? j1 : c + 1; r < d; ++r)
          if (y[c - j0][r].abs_prec() < cap) {
            ok = false;
            break;
          }
      if (ok) {
        for (std::size_t c = j0; c < j1; ++c)
          for (std::size_t r = clear ? j1 : c + 1; r < d; ++r)
            L(r, c) = y[c - j0][r].truncated(cap);
        break;
      }
      if (attempt >= 8) throw DegenerateInput("block normalization did not reach its precision");
      extra = 2 * extra + 4;
    }
    j0 = j1;
  }
  return L;
}

}  // namespace

PrecMatrix block_l(const PrecMatrix& M, const BlockType& type) {
  return block_l_impl(M, type, true);
}

PrecMatrix block_l_unitlower(const PrecMatrix& M, const BlockType& type) {
  return block_l_impl(M, type, false);
}

VlValue vl_of(const PrecMatrix& L) {
  std::int64_t known = std::numeric_limits<std::int64_t>::max();
  std::int64_t bound = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < L.rows(); ++i)
    for (std::size_t j = 0; j < L.cols(); ++j) {
      const Valuation v = L(i, j).valuation();
      if (v.exact)
        known = std::min(known, v.value);
      else if (i > j)
        bound = std::min(bound, v.value);
    }
  // unknown entries only matter when their bound is below the known minimum
  VlValue out;
  out.lo = -known;
  out.hi = bound < known ? -bound : -known;
  return out;
}

std::int64_t precision_loss(const PrecMatrix& L, std::int64_t N) {
  std::int64_t worst = N;
  for (std::size_t i = 0; i < L.rows(); ++i)
    for (std::size_t j = 0; j < i && j < L.cols(); ++j) worst = std::min(worst, L(i, j).abs_prec());
  return N - worst;
}

}  // namespace dvrlu
