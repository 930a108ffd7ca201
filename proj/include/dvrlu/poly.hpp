#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dvrlu/elem.hpp"

namespace dvrlu {

// Polynomial in X over K; c[i] is the coefficient of X^i. Trailing
// coefficients may be O(pi^n), so size() - 1 is only a degree bound.
struct Poly {
  const Ring* ring = nullptr;
  std::vector<PrecElem> c;

  Poly() = default;
  Poly(const Ring& r, std::vector<PrecElem> coeffs) : ring(&r), c(std::move(coeffs)) {}
  static Poly constant(const PrecElem& a);
  // X - a
  static Poly linear(const PrecElem& a, std::int64_t abs_prec);

  std::size_t size() const { return c.size(); }
  PrecElem coeff(std::size_t i, std::int64_t abs_if_missing) const;
  std::int64_t min_abs_prec() const;
  Poly truncated(std::int64_t abs_prec) const;
  std::string to_string() const;
  bool operator==(const Poly& o) const { return c == o.c; }
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const PrecElem& s, const Poly& a);
PrecElem evaluate(const Poly& f, const PrecElem& x);
Poly power(const Poly& f, std::size_t e, std::int64_t abs_prec);
// Division by a monic polynomial.
std::pair<Poly, Poly> divmod_monic(const Poly& num, const Poly& den);

// Power series in X_m truncated at X_m^order; c.size() == order.
struct Series {
  const Ring* ring = nullptr;
  std::vector<PrecElem> c;

  Series() = default;
  Series(const Ring& r, std::vector<PrecElem> coeffs) : ring(&r), c(std::move(coeffs)) {}
  static Series zero(const Ring& r, std::size_t order, std::int64_t abs_prec);
  static Series constant(const PrecElem& a, std::size_t order);

  std::size_t order() const { return c.size(); }
  const PrecElem& constant_term() const { return c.at(0); }
  // True when every coefficient is O(pi^n) with n >= abs_prec.
  bool negligible(std::int64_t abs_prec) const;
  std::int64_t min_abs_prec() const;
  Series lifted(std::int64_t abs_prec) const;
  Series truncated(std::int64_t abs_prec) const;
  Series with_order(std::size_t order) const;
  std::string to_string() const;
  bool operator==(const Series& o) const { return c == o.c; }
};

Series operator+(const Series& a, const Series& b);
Series operator-(const Series& a, const Series& b);
Series operator*(const Series& a, const Series& b);
Series operator*(const PrecElem& s, const Series& a);
// Inverse when the constant term is not O(pi^n).
Series inverse(const Series& a);

// Expansion of f at a, F(X) = sum_i s_i (X - a)^i, by repeated synthetic
// division (no factorials involved).
Series taylor_shift(const Poly& f, const PrecElem& a, std::size_t order);
// The polynomial of degree < order whose expansion at a is s.
Poly inverse_taylor_shift(const Series& s, const PrecElem& a);

// Dense row-major grid used for polynomial and series matrices.
template <class T>
struct Grid {
  std::size_t rows = 0, cols = 0;
  std::vector<T> data;

  Grid() = default;
  Grid(std::size_t r, std::size_t c, const T& fill) : rows(r), cols(c), data(r * c, fill) {}
  T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  void swap_columns(std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < rows; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  bool operator==(const Grid&) const = default;
};

using PolyMatrix = Grid<Poly>;
using SeriesMatrix = Grid<Series>;

}  // namespace dvrlu
