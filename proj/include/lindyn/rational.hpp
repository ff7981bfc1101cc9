#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "lindyn/errors.hpp"

namespace lindyn {

// Exact rational number. Thin wrapper over GMP's mpq_class pinning the
// conventions used everywhere in this library: values are always canonical
// (lowest terms, positive denominator), text form is always "num/den", and
// comparisons are exact. No floating point anywhere.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors integer literals
  Rational(long n, long d);
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }
  explicit Rational(const mpz_class& num, const mpz_class& den);

  // Strict parser: optional sign, decimal digits, optional "/digits".
  // No whitespace, no decimals, no exponent. Denominator zero is rejected.
  static Rational parse(std::string_view text);

  // Canonical text form, always with an explicit denominator: "3/1", "-2/5".
  std::string str() const;

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  Rational abs() const;

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
  friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
  friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
  friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t());
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  // 2^e for any integer e (negative exponents give dyadic fractions).
  static Rational pow2(std::int64_t e);
  // q^e for e >= 0.
  Rational pow(std::uint64_t e) const;

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

// floor(q) as int64; throws DomainError if it does not fit.
std::int64_t floor_to_int64(const Rational& q);
// ceil(q) as int64; throws DomainError if it does not fit.
std::int64_t ceil_to_int64(const Rational& q);
// Smallest integer n with n > q, i.e. floor(q)+1.
std::int64_t min_integer_exceeding(const Rational& q);
// Certified upper bound r >= sqrt(q) for q >= 0, with r - sqrt(q) < 1/den(q):
// for q = a/b (canonical) take r = ceil(sqrt(a*b))/b.
Rational sqrt_upper_bound(const Rational& q);

}  // namespace lindyn
