#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "dvrlu/ring.hpp"

namespace dvrlu {

// Valuation of an element; when exact is false the true valuation is only
// known to be >= value.
struct Valuation {
  std::int64_t value = 0;
  bool exact = true;
  bool operator==(const Valuation&) const = default;
};

// An element of K known as pi^v * u + O(pi^(v+r)), or O(pi^n).
class PrecElem {
 public:
  enum class Kind : std::uint8_t { unit_form, big_oh_zero };

  PrecElem() = default;

  static PrecElem zero(const Ring& ring, std::int64_t abs_prec);
  static PrecElem one(const Ring& ring, std::int64_t abs_prec);
  static PrecElem uniformizer_power(const Ring& ring, std::int64_t k, std::int64_t abs_prec);
  // Integer embedding Z -> R (for the series backend n is reduced mod p).
  static PrecElem from_integer(const Ring& ring, const mpz_class& n, std::int64_t abs_prec);
  static PrecElem from_integer(const Ring& ring, long n, std::int64_t abs_prec) {
    return from_integer(ring, mpz_class(n), abs_prec);
  }
  // p-adic only: num/den with den prime to nothing in particular.
  static PrecElem from_rational(const Ring& ring, const mpq_class& x, std::int64_t abs_prec);
  // value = pi^valuation * sum_i digits[i] pi^i, known modulo pi^abs_prec.
  static PrecElem from_digits(const Ring& ring, std::int64_t valuation,
                              const std::vector<std::uint32_t>& digits, std::int64_t abs_prec);
  // value = pi^valuation * packed; packed is the unit written as a base-p
  // integer (series coefficients are its base-p digits). Must be a unit.
  static PrecElem from_unit(const Ring& ring, std::int64_t valuation, const mpz_class& packed,
                            std::int64_t rel_prec);

  bool valid() const { return ring_ != nullptr; }
  const Ring& ring() const { return *ring_; }
  Kind kind() const { return kind_; }
  bool is_big_oh() const { return kind_ == Kind::big_oh_zero; }
  bool is_unit_form() const { return kind_ == Kind::unit_form; }

  Valuation valuation() const { return {val_, kind_ == Kind::unit_form}; }
  std::int64_t abs_prec() const { return kind_ == Kind::unit_form ? val_ + rel_ : val_; }
  std::int64_t rel_prec() const { return kind_ == Kind::unit_form ? rel_ : 0; }
  // Unit part as a base-p packed integer (p-adic: the unit itself).
  mpz_class unit_packed() const;
  // Base-p digits of the unit, length rel_prec.
  std::vector<std::uint32_t> unit_digits() const;
  // p-adic only: the exact rational pi^v * u represented here.
  mpq_class to_rational() const;
  // Integer representative when v >= 0 (p-adic), for oracles and printing.
  mpz_class to_integer() const;

  PrecElem truncated(std::int64_t abs_prec) const;
  PrecElem lifted(std::int64_t abs_prec) const;

  PrecElem operator-() const;
  friend PrecElem operator+(const PrecElem& a, const PrecElem& b);
  friend PrecElem operator-(const PrecElem& a, const PrecElem& b);
  friend PrecElem operator*(const PrecElem& a, const PrecElem& b);
  friend PrecElem operator/(const PrecElem& a, const PrecElem& b);
  PrecElem& operator+=(const PrecElem& b) { return *this = *this + b; }
  PrecElem& operator-=(const PrecElem& b) { return *this = *this - b; }
  PrecElem& operator*=(const PrecElem& b) { return *this = *this * b; }

  // Structural equality: same kind, valuation, digits and precision.
  bool operator==(const PrecElem& o) const;

  // True when a and b agree modulo pi^n (both must be known that far).
  friend bool agree_mod(const PrecElem& a, const PrecElem& b, std::int64_t n);

  std::string to_string() const;

 private:
  static PrecElem make_padic(const Ring& ring, mpz_class x, std::int64_t base_val,
                             std::int64_t abs_prec);
  static PrecElem make_series(const Ring& ring, std::vector<std::uint32_t> c,
                              std::int64_t base_val, std::int64_t abs_prec);

  const Ring* ring_ = nullptr;
  Kind kind_ = Kind::big_oh_zero;
  std::int64_t val_ = 0;  // valuation, or abs precision for big-oh
  std::int64_t rel_ = 0;
  mpz_class unit_;                    // p-adic unit in [1, p^rel)
  std::vector<std::uint32_t> coeffs_;  // series unit, size rel, coeffs_[0] != 0
};

// Counts PrecElem multiplications on the calling thread.
std::uint64_t& mul_counter();

}  // namespace dvrlu
