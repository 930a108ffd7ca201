#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dvrlu/elem.hpp"

namespace dvrlu {

class PrecMatrix {
 public:
  PrecMatrix() = default;
  // All entries O(pi^abs_prec).
  PrecMatrix(const Ring& ring, std::size_t rows, std::size_t cols, std::int64_t abs_prec);
  static PrecMatrix identity(const Ring& ring, std::size_t d, std::int64_t abs_prec);
  static PrecMatrix from_integers(const Ring& ring, const std::vector<std::vector<long>>& rows,
                                  std::int64_t abs_prec);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  const Ring& ring() const { return *ring_; }

  PrecElem& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const PrecElem& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  void swap_columns(std::size_t a, std::size_t b);
  void swap_rows(std::size_t a, std::size_t b);
  PrecMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const PrecMatrix& b);

  std::int64_t min_abs_prec() const;
  // Minimum valuation over entries; big-oh entries contribute their bound.
  Valuation min_valuation() const;
  PrecMatrix truncated(std::int64_t abs_prec) const;
  PrecMatrix lifted(std::int64_t abs_prec) const;
  PrecMatrix transposed() const;

  bool operator==(const PrecMatrix& o) const;
  std::string to_string() const;

 private:
  const Ring* ring_ = nullptr;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<PrecElem> data_;
};

PrecMatrix operator*(const PrecMatrix& a, const PrecMatrix& b);
PrecMatrix operator+(const PrecMatrix& a, const PrecMatrix& b);
PrecMatrix operator-(const PrecMatrix& a, const PrecMatrix& b);
PrecMatrix operator*(const PrecElem& s, const PrecMatrix& a);

// Determinant by Gaussian elimination with valuation pivoting.
PrecElem determinant(const PrecMatrix& a);
// Inverse over K; throws DivisionByUnknownZero if singular at this precision.
PrecMatrix inverse(const PrecMatrix& a);

// True when a and b agree entrywise modulo pi^n.
bool agree_mod(const PrecMatrix& a, const PrecMatrix& b, std::int64_t n);

}  // namespace dvrlu
