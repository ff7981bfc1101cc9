#pragma once

#include <cstdint>
#include <vector>

#include "lindyn/rational.hpp"

namespace lindyn {

// Polynomial with rational coefficients, viewed as an element of L^1[1/2, 1].
// Used by the non-shadowability demo for multiplication-by-x. Coefficients
// are kept normalized (no trailing zeros); coeffs()[k] multiplies x^k.
class PolyFunction {
 public:
  PolyFunction() = default;
  explicit PolyFunction(std::vector<Rational> coeffs);

  // delta * (1 + x + ... + x^(n-1)); the zero polynomial for n = 0.
  static PolyFunction geometric_sum(const Rational& delta, std::int64_t n);
  static PolyFunction constant(const Rational& c);

  const std::vector<Rational>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  std::int64_t degree() const { return static_cast<std::int64_t>(coeffs_.size()) - 1; }

  // x^n * f, the demo's operator iterated n times.
  PolyFunction shifted(std::int64_t n) const;

  friend PolyFunction operator+(const PolyFunction& f, const PolyFunction& g);
  friend PolyFunction operator-(const PolyFunction& f, const PolyFunction& g);
  friend PolyFunction operator*(const Rational& a, const PolyFunction& f);
  friend bool operator==(const PolyFunction& f, const PolyFunction& g) = default;

  // Exact integral over [1/2, 1]: sum of c_k (1 - 2^-(k+1))/(k+1).
  Rational integral_on_half_one() const;

  bool coeffs_sign_definite() const;

  // ||f||_1 on [1/2, 1]. Exact only when the coefficients are one-signed
  // (then the integrand never changes sign on [1/2, 1] and the norm is
  // |integral|); throws DomainError otherwise. Every polynomial this demo
  // manipulates is of that shape.
  Rational l1_norm_on_half_one() const;

 private:
  std::vector<Rational> coeffs_;
};

}  // namespace lindyn
