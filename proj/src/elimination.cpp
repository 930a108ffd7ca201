#include "elimination.hpp"

#include "dvrlu/error.hpp"

namespace dvrlu::detail {

PrecMatrix prepare_input(const PrecMatrix& M, std::int64_t& N) {
  if (!M.square() || M.empty()) throw InvalidArgument("expected a non-empty square matrix");
  N = M.min_abs_prec();
  if (N < 1) throw InvalidArgument("matrix precision must be at least 1");
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (M(i, j).is_unit_form() && M(i, j).valuation().value < 0)
        throw InvalidArgument("matrix entries must lie in R");
  return M.truncated(N);
}

bool must_swap(const PrecElem& entry, const PrecElem& pivot, std::size_t row, std::size_t col) {
  const Valuation ve = entry.valuation(), vp = pivot.valuation();
  if (ve.exact && vp.exact) return ve.value < vp.value;
  if (ve.exact) {
    // pivot is O(pi^n): the entry is smaller for sure only if v < n
    if (ve.value < vp.value) return true;
    throw AmbiguousValuation(row, col);
  }
  if (vp.exact) {
    if (ve.value >= vp.value) return false;
    throw AmbiguousValuation(row, col);
  }
  throw AmbiguousValuation(row, col);
}

void eliminate(PrecMatrix& w, PrecMatrix* t, std::size_t row, std::size_t pivot,
               std::size_t target, std::int64_t N) {
  if (must_swap(w(row, target), w(row, pivot), row, target)) {
    w.swap_columns(pivot, target);
    if (t) t->swap_columns(pivot, target);
  }
  const PrecElem& piv = w(row, pivot);
  if (piv.is_big_oh() || w(row, target).is_big_oh()) return;
  const PrecElem s = (w(row, target) / piv).lifted(N);
  if (s.is_big_oh()) return;
  auto update = [&](PrecMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const PrecElem& x = m(r, pivot);
      if (x.is_big_oh() && x.abs_prec() >= N) continue;
      m(r, target) -= s * x;
    }
  };
  update(w);
  if (t) update(*t);
}

}  // namespace dvrlu::detail
