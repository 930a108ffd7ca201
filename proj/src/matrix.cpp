#include "dvrlu/matrix.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>

#include "dvrlu/error.hpp"

namespace dvrlu {

PrecMatrix::PrecMatrix(const Ring& ring, std::size_t rows, std::size_t cols, std::int64_t abs_prec)
    : ring_(&ring), rows_(rows), cols_(cols), data_(rows * cols, PrecElem::zero(ring, abs_prec)) {}

PrecMatrix PrecMatrix::identity(const Ring& ring, std::size_t d, std::int64_t abs_prec) {
  PrecMatrix m(ring, d, d, abs_prec);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = PrecElem::one(ring, abs_prec);
  return m;
}

PrecMatrix PrecMatrix::from_integers(const Ring& ring, const std::vector<std::vector<long>>& rows,
                                     std::int64_t abs_prec) {
  const std::size_t nr = rows.size(), nc = nr ? rows[0].size() : 0;
  PrecMatrix m(ring, nr, nc, abs_prec);
  for (std::size_t i = 0; i < nr; ++i) {
    if (rows[i].size() != nc) throw InvalidArgument("ragged matrix rows");
    for (std::size_t j = 0; j < nc; ++j)
      m(i, j) = PrecElem::from_integer(ring, rows[i][j], abs_prec);
  }
  return m;
}

void PrecMatrix::swap_columns(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void PrecMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

PrecMatrix PrecMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  PrecMatrix b;
  b.ring_ = ring_;
  b.rows_ = nr;
  b.cols_ = nc;
  b.data_.reserve(nr * nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b.data_.push_back((*this)(r0 + i, c0 + j));
  return b;
}

void PrecMatrix::set_block(std::size_t r0, std::size_t c0, const PrecMatrix& b) {
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

std::int64_t PrecMatrix::min_abs_prec() const {
  std::int64_t m = std::numeric_limits<std::int64_t>::max();
  for (const auto& e : data_) m = std::min(m, e.abs_prec());
  return m;
}

Valuation PrecMatrix::min_valuation() const {
  Valuation best{std::numeric_limits<std::int64_t>::max(), true};
  for (const auto& e : data_) {
    Valuation v = e.valuation();
    if (v.value < best.value || (v.value == best.value && !v.exact)) best = v;
  }
  return best;
}

PrecMatrix PrecMatrix::truncated(std::int64_t abs_prec) const {
  PrecMatrix m = *this;
  for (auto& e : m.data_) e = e.truncated(abs_prec);
  return m;
}

PrecMatrix PrecMatrix::lifted(std::int64_t abs_prec) const {
  PrecMatrix m = *this;
  for (auto& e : m.data_) e = e.lifted(abs_prec);
  return m;
}

PrecMatrix PrecMatrix::transposed() const {
  PrecMatrix t;
  t.ring_ = ring_;
  t.rows_ = cols_;
  t.cols_ = rows_;
  t.data_.reserve(data_.size());
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t.data_.push_back((*this)(i, j));
  return t;
}

bool PrecMatrix::operator==(const PrecMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

std::string PrecMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    os << "[";
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
    os << "]\n";
  }
  return os.str();
}

PrecMatrix operator*(const PrecMatrix& a, const PrecMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("matrix product shape mismatch");
  PrecMatrix c(a.ring(), a.rows(), b.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      PrecElem s = a(i, 0) * b(0, j);
      for (std::size_t k = 1; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = std::move(s);
    }
  return c;
}

PrecMatrix operator+(const PrecMatrix& a, const PrecMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("shape mismatch");
  PrecMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

PrecMatrix operator-(const PrecMatrix& a, const PrecMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("shape mismatch");
  PrecMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

PrecMatrix operator*(const PrecElem& s, const PrecMatrix& a) {
  PrecMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

namespace {

// Row index >= k in column k of smallest exact valuation, if any.
std::optional<std::size_t> pivot_row(const PrecMatrix& w, std::size_t k) {
  std::optional<std::size_t> best;
  for (std::size_t i = k; i < w.rows(); ++i) {
    const PrecElem& e = w(i, k);
    if (e.is_big_oh()) continue;
    if (!best || e.valuation().value < w(*best, k).valuation().value) best = i;
  }
  return best;
}

std::int64_t lift_target(const PrecMatrix& a) {
  std::int64_t hi = 0, lo = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      hi = std::max(hi, a(i, j).abs_prec());
      lo = std::min(lo, a(i, j).valuation().value);
    }
  return hi - lo + 1;
}

}  // namespace

PrecElem determinant(const PrecMatrix& a) {
  if (!a.square()) throw InvalidArgument("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  const Ring& ring = a.ring();
  const std::int64_t high = lift_target(a);
  if (n == 0) return PrecElem::one(ring, high);
  PrecMatrix w = a;
  bool negate = false;
  std::optional<PrecElem> det;
  std::int64_t pivot_vals = 0;
  for (std::size_t k = 0; k < n; ++k) {
    auto r = pivot_row(w, k);
    if (!r) {
      // det = +-(pivots) * det(rest); bound det(rest) by column minima.
      std::int64_t bound = pivot_vals;
      for (std::size_t c = k; c < n; ++c) {
        std::int64_t m = std::numeric_limits<std::int64_t>::max();
        for (std::size_t i = k; i < n; ++i) m = std::min(m, w(i, c).valuation().value);
        bound += m;
      }
      return PrecElem::zero(ring, bound);
    }
    if (*r != k) {
      w.swap_rows(*r, k);
      negate = !negate;
    }
    const PrecElem piv = w(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      // m keeps its own precision so that the uncertainty of w(i, k) is
      // carried into the rest of the row
      const PrecElem m = w(i, k) / piv;
      for (std::size_t c = k + 1; c < n; ++c) w(i, c) -= m * w(k, c);
    }
    pivot_vals += piv.valuation().value;
    det = det ? *det * piv : piv;
  }
  return negate ? -*det : *det;
}

PrecMatrix inverse(const PrecMatrix& a) {
  if (!a.square()) throw InvalidArgument("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  const Ring& ring = a.ring();
  const std::int64_t high = lift_target(a);
  PrecMatrix w = a;
  PrecMatrix b = PrecMatrix::identity(ring, n, high);
  for (std::size_t k = 0; k < n; ++k) {
    auto r = pivot_row(w, k);
    if (!r) throw DivisionByUnknownZero();
    w.swap_rows(*r, k);
    b.swap_rows(*r, k);
    const PrecElem piv = w(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const PrecElem m = w(i, k) / piv;
      w(i, k) = PrecElem::zero(ring, high);
      for (std::size_t c = k + 1; c < n; ++c) w(i, c) -= m * w(k, c);
      for (std::size_t c = 0; c < n; ++c) b(i, c) -= m * b(k, c);
    }
  }
  PrecMatrix x(ring, n, n, high);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t k = n; k-- > 0;) {
      PrecElem s = b(k, c);
      for (std::size_t j = k + 1; j < n; ++j) s -= w(k, j) * x(j, c);
      x(k, c) = s / w(k, k);
    }
  return x;
}

bool agree_mod(const PrecMatrix& a, const PrecMatrix& b, std::int64_t n) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!agree_mod(a(i, j), b(i, j), n)) return false;
  return true;
}

}  // namespace dvrlu
