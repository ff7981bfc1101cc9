#include "lindyn/rational.hpp"

#include <cctype>
#include <ostream>

namespace lindyn {

Rational::Rational(long n, long d) {
  if (d == 0) throw DomainError("rational with zero denominator");
  v_ = mpq_class(n, d);
  v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  v_ = mpq_class(num) / mpq_class(den);
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  const auto fail = [&text]() -> Rational {
    throw ParseError("invalid rational '" + std::string(text) +
                     "': expected [sign]digits or [sign]digits/digits");
  };
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  std::size_t num_begin = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == num_begin) return fail();
  // mpz_set_str rejects a leading '+', so drop it before conversion
  const std::size_t sign_skip = text[0] == '+' ? 1 : 0;
  mpz_class num(std::string(text.substr(sign_skip, i - sign_skip)), 10);
  mpz_class den(1);
  if (i < text.size()) {
    if (text[i] != '/') return fail();
    ++i;
    std::size_t den_begin = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == den_begin || i != text.size()) return fail();
    den = mpz_class(std::string(text.substr(den_begin)), 10);
    if (den == 0) throw ParseError("invalid rational '" + std::string(text) +
                                   "': zero denominator");
  }
  mpq_class q(num);
  q /= mpq_class(den);
  q.canonicalize();
  return Rational(q);
}

std::string Rational::str() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational Rational::abs() const {
  return sign() < 0 ? Rational(mpq_class(-v_)) : *this;
}

Rational Rational::pow2(std::int64_t e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  mpq_class q;
  if (e >= 0) {
    q = p;
  } else {
    q = mpq_class(1) / mpq_class(p);
  }
  return Rational(q);
}

Rational Rational::pow(std::uint64_t e) const {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), e);
  mpq_class q(n);
  q /= mpq_class(d);
  return Rational(q);
}

std::ostream& operator<<(std::ostream& os, const Rational& q) {
  return os << q.str();
}

std::int64_t floor_to_int64(const Rational& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.num().get_mpz_t(), q.den().get_mpz_t());
  if (!f.fits_slong_p()) throw DomainError("floor does not fit in int64");
  return static_cast<std::int64_t>(f.get_si());
}

std::int64_t ceil_to_int64(const Rational& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.num().get_mpz_t(), q.den().get_mpz_t());
  if (!c.fits_slong_p()) throw DomainError("ceil does not fit in int64");
  return static_cast<std::int64_t>(c.get_si());
}

std::int64_t min_integer_exceeding(const Rational& q) {
  return floor_to_int64(q) + 1;
}

Rational sqrt_upper_bound(const Rational& q) {
  if (q.sign() < 0) throw DomainError("sqrt of negative rational");
  mpz_class t = q.num() * q.den();
  mpz_class root, rem;
  mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), t.get_mpz_t());
  if (rem != 0) root += 1;
  return Rational(root, q.den());
}

}  // namespace lindyn
