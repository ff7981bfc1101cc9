#pragma once

#include <compare>
#include <optional>

#include "lindyn/seq_vector.hpp"

namespace lindyn {

// Which sequence-space norm a computation runs under.
enum class NormKind { One, Two, Infinity };

std::string to_string(NormKind k);
NormKind norm_kind_from_string(std::string_view s);

// Exact ordering of ||v||_k against a rational bound >= 0. For k=Two the
// comparison is done on squares, so no square root is ever taken and the
// answer is still exact. Negative bounds are rejected.
std::strong_ordering norm_compare(const SeqVector& v, const Rational& bound, NormKind k);

// ||v||_2^2, exact.
Rational norm_two_squared(const SeqVector& v);

// Exact norm value when it is rational: always for One/Infinity, and for Two
// exactly when ||v||_2^2 is a square of a rational. Otherwise nullopt.
std::optional<Rational> norm_exact(const SeqVector& v, NormKind k);

// Certified upper bound on ||v||_k. Exact for One/Infinity; for Two it is the
// ceil-sqrt bound r = ceil(sqrt(a*b))/b where ||v||^2 = a/b, which satisfies
// ||v|| <= r < ||v|| + 1/b.
Rational norm_upper_bound(const SeqVector& v, NormKind k);

// true iff ||v|| < bound (strict), false otherwise; exact.
bool norm_less(const SeqVector& v, const Rational& bound, NormKind k);
// true iff ||v|| <= bound; exact.
bool norm_leq(const SeqVector& v, const Rational& bound, NormKind k);

// Exact comparison ||v|| vs ||w|| under the same norm (squares for Two).
std::strong_ordering norm_compare_vectors(const SeqVector& v, const SeqVector& w, NormKind k);

}  // namespace lindyn
