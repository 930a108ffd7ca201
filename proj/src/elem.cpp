#include "dvrlu/elem.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "dvrlu/error.hpp"

namespace dvrlu {

std::uint64_t& mul_counter() {
  thread_local std::uint64_t count = 0;
  return count;
}

namespace {

void require_same(const PrecElem& a, const PrecElem& b) {
  if (!a.valid() || !b.valid()) throw InvalidArgument("uninitialized element");
  if (&a.ring() != &b.ring()) throw InvalidArgument("elements over different rings");
}

// Truncated product of two coefficient lists, result length n.
std::vector<std::uint32_t> series_mul(const std::vector<std::uint32_t>& a,
                                      const std::vector<std::uint32_t>& b, std::size_t n,
                                      std::uint32_t p) {
  std::vector<std::uint32_t> c(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    unsigned __int128 acc = 0;
    std::size_t lo = k + 1 > b.size() ? k + 1 - b.size() : 0;
    std::size_t hi = std::min(k, a.size() - 1);
    for (std::size_t i = lo; i <= hi && i < a.size(); ++i)
      acc += static_cast<std::uint64_t>(a[i]) * b[k - i];
    c[k] = static_cast<std::uint32_t>(acc % p);
  }
  return c;
}

std::vector<std::uint32_t> series_inverse(const Ring& ring, const std::vector<std::uint32_t>& u,
                                          std::size_t n) {
  const std::uint32_t p = ring.p();
  std::vector<std::uint32_t> inv(n, 0);
  const std::uint64_t i0 = ring.inv_mod_p(u[0]);
  inv[0] = static_cast<std::uint32_t>(i0);
  for (std::size_t k = 1; k < n; ++k) {
    unsigned __int128 acc = 0;
    for (std::size_t i = 1; i <= k && i < u.size(); ++i)
      acc += static_cast<std::uint64_t>(u[i]) * inv[k - i];
    std::uint64_t s = static_cast<std::uint64_t>(acc % p);
    inv[k] = static_cast<std::uint32_t>(((p - s) % p) * i0 % p);
  }
  return inv;
}

}  // namespace

PrecElem PrecElem::zero(const Ring& ring, std::int64_t abs_prec) {
  PrecElem e;
  e.ring_ = &ring;
  e.kind_ = Kind::big_oh_zero;
  e.val_ = abs_prec;
  return e;
}

PrecElem PrecElem::one(const Ring& ring, std::int64_t abs_prec) {
  return uniformizer_power(ring, 0, abs_prec);
}

PrecElem PrecElem::uniformizer_power(const Ring& ring, std::int64_t k, std::int64_t abs_prec) {
  if (abs_prec <= k) return zero(ring, abs_prec);
  return from_unit(ring, k, 1, abs_prec - k);
}

PrecElem PrecElem::make_padic(const Ring& ring, mpz_class x, std::int64_t base_val,
                              std::int64_t abs_prec) {
  if (abs_prec <= base_val || x == 0) return zero(ring, abs_prec);
  const std::int64_t r = abs_prec - base_val;
  const mpz_class& mod = ring.pow(r);
  if (x < 0 || x >= mod) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
  if (x == 0) return zero(ring, abs_prec);
  std::int64_t k = 0;
  if (ring.p() == 2) {
    k = static_cast<std::int64_t>(mpz_scan1(x.get_mpz_t(), 0));
    if (k) mpz_tdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  } else {
    while (mpz_divisible_ui_p(x.get_mpz_t(), ring.p())) {
      mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), ring.p());
      ++k;
    }
  }
  PrecElem e;
  e.ring_ = &ring;
  e.kind_ = Kind::unit_form;
  e.val_ = base_val + k;
  e.rel_ = r - k;
  e.unit_ = std::move(x);
  return e;
}

PrecElem PrecElem::make_series(const Ring& ring, std::vector<std::uint32_t> c,
                               std::int64_t base_val, std::int64_t abs_prec) {
  if (abs_prec <= base_val) return zero(ring, abs_prec);
  const std::size_t r = static_cast<std::size_t>(abs_prec - base_val);
  if (c.size() > r) c.resize(r);
  std::size_t k = 0;
  while (k < c.size() && c[k] == 0) ++k;
  if (k == c.size()) return zero(ring, abs_prec);
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(k));
  c.resize(r - k, 0);
  PrecElem e;
  e.ring_ = &ring;
  e.kind_ = Kind::unit_form;
  e.val_ = base_val + static_cast<std::int64_t>(k);
  e.rel_ = static_cast<std::int64_t>(r - k);
  e.coeffs_ = std::move(c);
  return e;
}

PrecElem PrecElem::from_integer(const Ring& ring, const mpz_class& n, std::int64_t abs_prec) {
  if (ring.is_padic()) return make_padic(ring, n, 0, abs_prec);
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), ring.p());
  return make_series(ring, {static_cast<std::uint32_t>(r.get_ui())}, 0, abs_prec);
}

PrecElem PrecElem::from_rational(const Ring& ring, const mpq_class& x, std::int64_t abs_prec) {
  if (!ring.is_padic()) throw InvalidArgument("rationals embed only in the p-adic backend");
  if (x == 0) return zero(ring, abs_prec);
  mpz_class num = x.get_num(), den = x.get_den();
  std::int64_t v = 0;
  while (mpz_divisible_ui_p(num.get_mpz_t(), ring.p())) {
    mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), ring.p());
    ++v;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), ring.p())) {
    mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), ring.p());
    --v;
  }
  if (abs_prec <= v) return zero(ring, abs_prec);
  const mpz_class& mod = ring.pow(abs_prec - v);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  return make_padic(ring, num * inv, v, abs_prec);
}

PrecElem PrecElem::from_digits(const Ring& ring, std::int64_t valuation,
                               const std::vector<std::uint32_t>& digits, std::int64_t abs_prec) {
  for (auto d : digits)
    if (d >= ring.p()) throw InvalidArgument("digit out of range");
  if (ring.is_padic()) {
    const std::size_t n =
        std::min<std::size_t>(digits.size(), static_cast<std::size_t>(std::max<std::int64_t>(
                                                  0, abs_prec - valuation)));
    mpz_class x = 0;
    for (std::size_t i = n; i-- > 0;) {
      x *= ring.p();
      x += digits[i];
    }
    return make_padic(ring, std::move(x), valuation, abs_prec);
  }
  return make_series(ring, digits, valuation, abs_prec);
}

PrecElem PrecElem::from_unit(const Ring& ring, std::int64_t valuation, const mpz_class& packed,
                             std::int64_t rel_prec) {
  if (rel_prec < 1) throw InvalidArgument("relative precision must be positive");
  if (packed <= 0 || packed >= ring.pow(rel_prec) ||
      mpz_divisible_ui_p(packed.get_mpz_t(), ring.p()))
    throw InvalidArgument("unit digits out of range or not a unit");
  if (ring.is_padic()) {
    PrecElem e;
    e.ring_ = &ring;
    e.kind_ = Kind::unit_form;
    e.val_ = valuation;
    e.rel_ = rel_prec;
    e.unit_ = packed;
    return e;
  }
  std::vector<std::uint32_t> c(static_cast<std::size_t>(rel_prec), 0);
  mpz_class t = packed;
  for (std::size_t i = 0; i < c.size() && t != 0; ++i)
    c[i] = static_cast<std::uint32_t>(mpz_fdiv_q_ui(t.get_mpz_t(), t.get_mpz_t(), ring.p()));
  return make_series(ring, std::move(c), valuation, valuation + rel_prec);
}

mpz_class PrecElem::unit_packed() const {
  if (is_big_oh()) return 0;
  if (ring_->is_padic()) return unit_;
  mpz_class x = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    x *= ring_->p();
    x += coeffs_[i];
  }
  return x;
}

std::vector<std::uint32_t> PrecElem::unit_digits() const {
  if (is_big_oh()) return {};
  if (!ring_->is_padic()) return coeffs_;
  std::vector<std::uint32_t> d(static_cast<std::size_t>(rel_));
  mpz_class t = unit_;
  for (auto& x : d)
    x = static_cast<std::uint32_t>(mpz_fdiv_q_ui(t.get_mpz_t(), t.get_mpz_t(), ring_->p()));
  return d;
}

mpq_class PrecElem::to_rational() const {
  if (!ring_->is_padic()) throw InvalidArgument("to_rational needs the p-adic backend");
  if (is_big_oh()) return 0;
  mpq_class x(unit_);
  if (val_ >= 0)
    x *= ring_->pow(val_);
  else
    x /= ring_->pow(-val_);
  return x;
}

mpz_class PrecElem::to_integer() const {
  mpq_class q = to_rational();
  if (q.get_den() != 1) throw InvalidArgument("element is not integral");
  return q.get_num();
}

PrecElem PrecElem::truncated(std::int64_t a) const {
  if (is_big_oh()) return val_ <= a ? *this : zero(*ring_, a);
  if (a >= val_ + rel_) return *this;
  if (a <= val_) return zero(*ring_, a);
  const std::int64_t r = a - val_;
  PrecElem e;
  e.ring_ = ring_;
  e.kind_ = Kind::unit_form;
  e.val_ = val_;
  e.rel_ = r;
  if (ring_->is_padic()) {
    mpz_fdiv_r(e.unit_.get_mpz_t(), unit_.get_mpz_t(), ring_->pow(r).get_mpz_t());
  } else {
    e.coeffs_.assign(coeffs_.begin(), coeffs_.begin() + r);
  }
  return e;
}

PrecElem PrecElem::lifted(std::int64_t a) const {
  if (is_big_oh()) return zero(*ring_, a);
  if (a <= val_ + rel_) return truncated(a);
  PrecElem e = *this;
  e.rel_ = a - val_;
  if (!ring_->is_padic()) e.coeffs_.resize(static_cast<std::size_t>(e.rel_), 0);
  return e;
}

PrecElem PrecElem::operator-() const {
  if (is_big_oh()) return *this;
  PrecElem e = *this;
  if (ring_->is_padic()) {
    e.unit_ = ring_->pow(rel_) - unit_;
  } else {
    const std::uint32_t p = ring_->p();
    for (auto& c : e.coeffs_) c = c ? p - c : 0;
  }
  return e;
}

PrecElem operator+(const PrecElem& a, const PrecElem& b) {
  require_same(a, b);
  const Ring& ring = a.ring();
  const std::int64_t A = std::min(a.abs_prec(), b.abs_prec());
  if (a.is_big_oh()) return b.truncated(A);
  if (b.is_big_oh()) return a.truncated(A);
  const std::int64_t m = std::min(a.val_, b.val_);
  if (A <= m) return PrecElem::zero(ring, A);
  const std::int64_t R = A - m;
  if (ring.is_padic()) {
    mpz_class x;
    const std::int64_t da = a.val_ - m, db = b.val_ - m;
    if (da < R) {
      if (da == 0)
        x = a.unit_;
      else
        x = a.unit_ * ring.pow(da);
    }
    if (db < R) {
      if (db == 0)
        x += b.unit_;
      else
        x += b.unit_ * ring.pow(db);
    }
    return PrecElem::make_padic(ring, std::move(x), m, A);
  }
  const std::uint32_t p = ring.p();
  std::vector<std::uint32_t> c(static_cast<std::size_t>(R), 0);
  for (const PrecElem* e : {&a, &b}) {
    const std::size_t off = static_cast<std::size_t>(e->val_ - m);
    for (std::size_t i = 0; i < e->coeffs_.size() && off + i < c.size(); ++i) {
      std::uint32_t s = c[off + i] + e->coeffs_[i];
      c[off + i] = s >= p ? s - p : s;
    }
  }
  return PrecElem::make_series(ring, std::move(c), m, A);
}

PrecElem operator-(const PrecElem& a, const PrecElem& b) { return a + (-b); }

PrecElem operator*(const PrecElem& a, const PrecElem& b) {
  require_same(a, b);
  ++mul_counter();
  const Ring& ring = a.ring();
  if (a.is_big_oh() && b.is_big_oh()) return PrecElem::zero(ring, a.val_ + b.val_);
  if (a.is_big_oh()) return PrecElem::zero(ring, a.val_ + b.val_);
  if (b.is_big_oh()) return PrecElem::zero(ring, b.val_ + a.val_);
  const std::int64_t r = std::min(a.rel_, b.rel_);
  PrecElem e;
  e.ring_ = &ring;
  e.kind_ = PrecElem::Kind::unit_form;
  e.val_ = a.val_ + b.val_;
  e.rel_ = r;
  if (ring.is_padic()) {
    mpz_mul(e.unit_.get_mpz_t(), a.unit_.get_mpz_t(), b.unit_.get_mpz_t());
    mpz_fdiv_r(e.unit_.get_mpz_t(), e.unit_.get_mpz_t(), ring.pow(r).get_mpz_t());
  } else {
    e.coeffs_ = series_mul(a.coeffs_, b.coeffs_, static_cast<std::size_t>(r), ring.p());
  }
  return e;
}

PrecElem operator/(const PrecElem& a, const PrecElem& b) {
  require_same(a, b);
  const Ring& ring = a.ring();
  if (b.is_big_oh()) throw DivisionByUnknownZero();
  if (a.is_big_oh()) return PrecElem::zero(ring, a.val_ - b.val_);
  const std::int64_t r = std::min(a.rel_, b.rel_);
  PrecElem e;
  e.ring_ = &ring;
  e.kind_ = PrecElem::Kind::unit_form;
  e.val_ = a.val_ - b.val_;
  e.rel_ = r;
  if (ring.is_padic()) {
    const mpz_class& mod = ring.pow(r);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), b.unit_.get_mpz_t(), mod.get_mpz_t());
    mpz_mul(e.unit_.get_mpz_t(), a.unit_.get_mpz_t(), inv.get_mpz_t());
    mpz_fdiv_r(e.unit_.get_mpz_t(), e.unit_.get_mpz_t(), mod.get_mpz_t());
  } else {
    const std::size_t n = static_cast<std::size_t>(r);
    e.coeffs_ = series_mul(a.coeffs_, series_inverse(ring, b.coeffs_, n), n, ring.p());
  }
  return e;
}

bool PrecElem::operator==(const PrecElem& o) const {
  if (ring_ != o.ring_ || kind_ != o.kind_ || val_ != o.val_) return false;
  if (is_big_oh()) return true;
  return rel_ == o.rel_ && (ring_->is_padic() ? unit_ == o.unit_ : coeffs_ == o.coeffs_);
}

bool agree_mod(const PrecElem& a, const PrecElem& b, std::int64_t n) {
  if (a.abs_prec() < n || b.abs_prec() < n) return false;
  return (a.truncated(n) - b.truncated(n)).is_big_oh();
}

std::string PrecElem::to_string() const {
  if (!ring_) return "<invalid>";
  std::ostringstream os;
  const char* pi = ring_->is_padic() ? nullptr : "t";
  auto base = [&]() {
    if (pi)
      os << pi;
    else
      os << ring_->p();
  };
  if (is_big_oh()) {
    os << "O(";
    base();
    os << "^" << val_ << ")";
    return os.str();
  }
  if (ring_->is_padic()) {
    os << unit_.get_str();
  } else {
    os << "(";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i) os << " + ";
      os << coeffs_[i];
      if (i) os << "*t^" << i;
    }
    os << ")";
  }
  if (val_ != 0) {
    os << "*";
    base();
    os << "^" << val_;
  }
  os << " + O(";
  base();
  os << "^" << abs_prec() << ")";
  return os.str();
}

}  // namespace dvrlu
