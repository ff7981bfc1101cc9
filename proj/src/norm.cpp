#include "lindyn/norm.hpp"

namespace lindyn {

std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::One: return "1";
    case NormKind::Two: return "2";
    case NormKind::Infinity: return "inf";
  }
  throw DomainError("unknown norm kind");
}

NormKind norm_kind_from_string(std::string_view s) {
  if (s == "1") return NormKind::One;
  if (s == "2") return NormKind::Two;
  if (s == "inf" || s == "infinity") return NormKind::Infinity;
  throw ParseError("unknown norm '" + std::string(s) + "': expected 1, 2 or inf");
}

namespace {

Rational norm_one(const SeqVector& v) {
  Rational s(0);
  for (const auto& [i, q] : v.entries()) s += q.abs();
  return s;
}

Rational norm_infinity(const SeqVector& v) {
  Rational m(0);
  for (const auto& [i, q] : v.entries()) {
    Rational a = q.abs();
    if (a > m) m = a;
  }
  return m;
}

}  // namespace

Rational norm_two_squared(const SeqVector& v) {
  Rational s(0);
  for (const auto& [i, q] : v.entries()) s += q * q;
  return s;
}

std::strong_ordering norm_compare(const SeqVector& v, const Rational& bound, NormKind k) {
  if (bound.sign() < 0) throw DomainError("norm comparison against negative bound");
  switch (k) {
    case NormKind::One:
      return norm_one(v) <=> bound;
    case NormKind::Infinity:
      return norm_infinity(v) <=> bound;
    case NormKind::Two:
      return norm_two_squared(v) <=> bound * bound;
  }
  throw DomainError("unknown norm kind");
}

std::optional<Rational> norm_exact(const SeqVector& v, NormKind k) {
  switch (k) {
    case NormKind::One: return norm_one(v);
    case NormKind::Infinity: return norm_infinity(v);
    case NormKind::Two: {
      const Rational sq = norm_two_squared(v);
      const Rational r = sqrt_upper_bound(sq);
      if (r * r == sq) return r;
      return std::nullopt;
    }
  }
  throw DomainError("unknown norm kind");
}

Rational norm_upper_bound(const SeqVector& v, NormKind k) {
  switch (k) {
    case NormKind::One: return norm_one(v);
    case NormKind::Infinity: return norm_infinity(v);
    case NormKind::Two: return sqrt_upper_bound(norm_two_squared(v));
  }
  throw DomainError("unknown norm kind");
}

bool norm_less(const SeqVector& v, const Rational& bound, NormKind k) {
  if (bound.sign() < 0) return false;
  return norm_compare(v, bound, k) == std::strong_ordering::less;
}

bool norm_leq(const SeqVector& v, const Rational& bound, NormKind k) {
  if (bound.sign() < 0) return false;
  return norm_compare(v, bound, k) != std::strong_ordering::greater;
}

std::strong_ordering norm_compare_vectors(const SeqVector& v, const SeqVector& w, NormKind k) {
  switch (k) {
    case NormKind::One:
      return norm_one(v) <=> norm_one(w);
    case NormKind::Infinity:
      return norm_infinity(v) <=> norm_infinity(w);
    case NormKind::Two:
      return norm_two_squared(v) <=> norm_two_squared(w);
  }
  throw DomainError("unknown norm kind");
}

}  // namespace lindyn
