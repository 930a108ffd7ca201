#include "dvrlu/poly.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "dvrlu/error.hpp"

namespace dvrlu {

namespace {

const Ring& ring_of(const Poly& a, const Poly& b) {
  if (a.ring) return *a.ring;
  if (b.ring) return *b.ring;
  throw InvalidArgument("polynomial without a ring");
}

// acc += x, treating an invalid acc as an empty sum
void accumulate(PrecElem& acc, const PrecElem& x) {
  if (acc.valid())
    acc += x;
  else
    acc = x;
}

}  // namespace

Poly Poly::constant(const PrecElem& a) { return Poly(a.ring(), {a}); }

Poly Poly::linear(const PrecElem& a, std::int64_t abs_prec) {
  return Poly(a.ring(), {-a, PrecElem::one(a.ring(), abs_prec)});
}

PrecElem Poly::coeff(std::size_t i, std::int64_t abs_if_missing) const {
  if (i < c.size()) return c[i];
  return PrecElem::zero(*ring, abs_if_missing);
}

std::int64_t Poly::min_abs_prec() const {
  std::int64_t m = std::numeric_limits<std::int64_t>::max();
  for (const auto& x : c) m = std::min(m, x.abs_prec());
  return m;
}

Poly Poly::truncated(std::int64_t abs_prec) const {
  Poly r = *this;
  for (auto& x : r.c) x = x.truncated(abs_prec);
  return r;
}

std::string Poly::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << " + ";
    os << "(" << c[i].to_string() << ")";
    if (i) os << "*X^" << i;
  }
  if (c.empty()) os << "0";
  return os.str();
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r(ring_of(a, b), {});
  r.c.resize(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    if (i < a.size() && i < b.size())
      r.c[i] = a.c[i] + b.c[i];
    else
      r.c[i] = i < a.size() ? a.c[i] : b.c[i];
  }
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly nb = b;
  for (auto& x : nb.c) x = -x;
  return a + nb;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r(ring_of(a, b), {});
  if (a.c.empty() || b.c.empty()) return r;
  r.c.resize(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) accumulate(r.c[i + j], a.c[i] * b.c[j]);
  return r;
}

Poly operator*(const PrecElem& s, const Poly& a) {
  Poly r = a;
  for (auto& x : r.c) x = s * x;
  return r;
}

PrecElem evaluate(const Poly& f, const PrecElem& x) {
  if (f.c.empty()) return PrecElem::zero(x.ring(), x.abs_prec());
  PrecElem r = f.c.back();
  for (std::size_t i = f.size() - 1; i-- > 0;) r = r * x + f.c[i];
  return r;
}

Poly power(const Poly& f, std::size_t e, std::int64_t abs_prec) {
  Poly r = Poly::constant(PrecElem::one(*f.ring, abs_prec));
  for (std::size_t k = 0; k < e; ++k) r = r * f;
  return r;
}

std::pair<Poly, Poly> divmod_monic(const Poly& num, const Poly& den) {
  if (den.c.empty()) throw InvalidArgument("division by the zero polynomial");
  const std::size_t dd = den.size() - 1;
  Poly rem = num;
  Poly quo(ring_of(num, den), {});
  if (num.size() <= dd) return {quo, rem};
  quo.c.resize(num.size() - dd);
  for (std::size_t k = num.size() - dd; k-- > 0;) {
    const PrecElem q = rem.c[k + dd];
    quo.c[k] = q;
    for (std::size_t i = 0; i < dd; ++i) rem.c[k + i] -= q * den.c[i];
  }
  rem.c.resize(dd);
  return {quo, rem};
}

Series Series::zero(const Ring& r, std::size_t order, std::int64_t abs_prec) {
  return Series(r, std::vector<PrecElem>(order, PrecElem::zero(r, abs_prec)));
}

Series Series::constant(const PrecElem& a, std::size_t order) {
  Series s = zero(a.ring(), order, a.abs_prec());
  if (order) s.c[0] = a;
  return s;
}

bool Series::negligible(std::int64_t abs_prec) const {
  for (const auto& x : c)
    if (!x.is_big_oh() || x.abs_prec() < abs_prec) return false;
  return true;
}

std::int64_t Series::min_abs_prec() const {
  std::int64_t m = std::numeric_limits<std::int64_t>::max();
  for (const auto& x : c) m = std::min(m, x.abs_prec());
  return m;
}

Series Series::lifted(std::int64_t abs_prec) const {
  Series r = *this;
  for (auto& x : r.c) x = x.lifted(abs_prec);
  return r;
}

Series Series::truncated(std::int64_t abs_prec) const {
  Series r = *this;
  for (auto& x : r.c) x = x.truncated(abs_prec);
  return r;
}

Series Series::with_order(std::size_t order) const {
  Series r = *this;
  const std::int64_t fill = c.empty() ? 0 : min_abs_prec();
  r.c.resize(order, PrecElem::zero(*ring, fill));
  return r;
}

std::string Series::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << " + ";
    os << "(" << c[i].to_string() << ")";
    if (i) os << "*T^" << i;
  }
  os << " + O(T^" << c.size() << ")";
  return os.str();
}

Series operator+(const Series& a, const Series& b) {
  const std::size_t n = std::min(a.order(), b.order());
  Series r(a.ring ? *a.ring : *b.ring, std::vector<PrecElem>(n));
  for (std::size_t i = 0; i < n; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

Series operator-(const Series& a, const Series& b) {
  const std::size_t n = std::min(a.order(), b.order());
  Series r(a.ring ? *a.ring : *b.ring, std::vector<PrecElem>(n));
  for (std::size_t i = 0; i < n; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

Series operator*(const Series& a, const Series& b) {
  const std::size_t n = std::min(a.order(), b.order());
  Series r(a.ring ? *a.ring : *b.ring, std::vector<PrecElem>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i <= k; ++i) accumulate(r.c[k], a.c[i] * b.c[k - i]);
  return r;
}

Series operator*(const PrecElem& s, const Series& a) {
  Series r = a;
  for (auto& x : r.c) x = s * x;
  return r;
}

Series inverse(const Series& a) {
  if (a.c.empty()) return a;
  if (a.c[0].is_big_oh()) throw DivisionByUnknownZero();
  const std::size_t n = a.order();
  Series b(*a.ring, std::vector<PrecElem>(n));
  const PrecElem inv0 = PrecElem::one(*a.ring, a.c[0].rel_prec()) / a.c[0];
  b.c[0] = inv0;
  for (std::size_t k = 1; k < n; ++k) {
    PrecElem acc;
    for (std::size_t i = 1; i <= k; ++i) accumulate(acc, a.c[i] * b.c[k - i]);
    b.c[k] = -(acc * inv0);
  }
  return b;
}

Series taylor_shift(const Poly& f, const PrecElem& a, std::size_t order) {
  const Ring& ring = a.ring();
  const std::int64_t fill = f.c.empty() ? a.abs_prec() : f.min_abs_prec();
  Series out = Series::zero(ring, order, fill);
  std::vector<PrecElem> cur = f.c;
  for (std::size_t i = 0; i < order && !cur.empty(); ++i) {
    // cur = q * (X - a) + r
    const std::size_t n = cur.size();
    std::vector<PrecElem> q(n - 1);
    if (n >= 2) {
      q[n - 2] = cur[n - 1];
      for (std::size_t k = n - 2; k >= 1; --k) q[k - 1] = cur[k] + a * q[k];
      out.c[i] = cur[0] + a * q[0];
    } else {
      out.c[i] = cur[0];
    }
    cur = std::move(q);
  }
  return out;
}

Poly inverse_taylor_shift(const Series& s, const PrecElem& a) {
  const Ring& ring = a.ring();
  if (s.c.empty()) return Poly(ring, {});
  std::vector<PrecElem> f{s.c.back()};
  for (std::size_t i = s.order() - 1; i-- > 0;) {
    // f <- f * (X - a) + s_i
    std::vector<PrecElem> g(f.size() + 1);
    g[0] = -(a * f[0]) + s.c[i];
    for (std::size_t k = 1; k < f.size(); ++k) g[k] = f[k - 1] - a * f[k];
    g[f.size()] = f.back();
    f = std::move(g);
  }
  return Poly(ring, std::move(f));
}

}  // namespace dvrlu
