#include "lindyn/poly.hpp"

namespace lindyn {

namespace {

void normalize(std::vector<Rational>& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

}  // namespace

PolyFunction::PolyFunction(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  normalize(coeffs_);
}

PolyFunction PolyFunction::geometric_sum(const Rational& delta, std::int64_t n) {
  if (n < 0) throw DomainError("geometric_sum needs n >= 0");
  std::vector<Rational> c(static_cast<std::size_t>(n), delta);
  return PolyFunction(std::move(c));
}

PolyFunction PolyFunction::constant(const Rational& c) { return PolyFunction({c}); }

PolyFunction PolyFunction::shifted(std::int64_t n) const {
  if (n < 0) throw DomainError("shifted needs n >= 0");
  if (is_zero()) return *this;
  std::vector<Rational> c(static_cast<std::size_t>(n), Rational(0));
  c.insert(c.end(), coeffs_.begin(), coeffs_.end());
  return PolyFunction(std::move(c));
}

PolyFunction operator+(const PolyFunction& f, const PolyFunction& g) {
  std::vector<Rational> c(std::max(f.coeffs_.size(), g.coeffs_.size()), Rational(0));
  for (std::size_t k = 0; k < f.coeffs_.size(); ++k) c[k] += f.coeffs_[k];
  for (std::size_t k = 0; k < g.coeffs_.size(); ++k) c[k] += g.coeffs_[k];
  return PolyFunction(std::move(c));
}

PolyFunction operator-(const PolyFunction& f, const PolyFunction& g) {
  return f + (Rational(-1) * g);
}

PolyFunction operator*(const Rational& a, const PolyFunction& f) {
  std::vector<Rational> c = f.coeffs_;
  for (auto& x : c) x *= a;
  return PolyFunction(std::move(c));
}

Rational PolyFunction::integral_on_half_one() const {
  Rational s(0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const auto e = static_cast<std::int64_t>(k) + 1;
    s += coeffs_[k] * (Rational(1) - Rational::pow2(-e)) / Rational(e);
  }
  return s;
}

bool PolyFunction::coeffs_sign_definite() const {
  bool pos = false, neg = false;
  for (const auto& c : coeffs_) {
    if (c.sign() > 0) pos = true;
    if (c.sign() < 0) neg = true;
  }
  return !(pos && neg);
}

Rational PolyFunction::l1_norm_on_half_one() const {
  if (!coeffs_sign_definite()) {
    throw DomainError("exact L1 norm implemented only for one-signed coefficients");
  }
  return integral_on_half_one().abs();
}

}  // namespace lindyn
