#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "lindyn/norm.hpp"

namespace lindyn {

// Closed enumeration of the linear operators this library manipulates.
// Forward variants exist so that capability queries (inverse, right inverse)
// can return first-class operators: BilateralForwardShift inverts
// BilateralShift, WeightedForwardShift realizes the contracting right
// inverses of the backward shifts.
enum class OperatorKind {
  Identity,
  WeightedBackwardShift,
  WeightedForwardShift,
  DoublingShiftFixedLine,
  BilateralShift,
  BilateralForwardShift,
  Diagonal,
  Rotation,
  ScalarMultiple,
  DirectSum,
  Product,
};

std::string to_string(OperatorKind k);

struct OperatorBlock;

// Immutable operator value. Cheap to copy (shared structure). Applying an
// operator is exact; norm bounds are certified rational upper bounds on the
// operator norm under the requested NormKind.
class Operator {
 public:
  // e_i <-> e_i. Defined on either index domain.
  static Operator identity(IndexDomain d = IndexDomain::Naturals);
  // e_0 -> 0, e_i -> w_i e_{i-1} (i >= 1) on naturals;
  // w_i = prefix[i-1] for i <= prefix.size(), tail beyond.
  static Operator weighted_backward_shift(std::vector<Rational> prefix, Rational tail);
  // e_i -> w_i e_{i+1} with w_i = prefix[i] for i < prefix.size(), tail beyond.
  static Operator weighted_forward_shift(std::vector<Rational> prefix, Rational tail);
  // e_0 -> e_0, e_i -> 2 e_{i-1} (i >= 1): backward shift with a fixed line.
  static Operator doubling_shift_fixed_line();
  // e_i -> w e_{i-1} on integers.
  static Operator bilateral_shift(Rational weight);
  // e_i -> w e_{i+1} on integers.
  static Operator bilateral_forward_shift(Rational weight);
  // e_i -> d_i e_i; d_i = prefix[i] for i < prefix.size(), dflt beyond.
  static Operator diagonal(std::vector<Rational> prefix, Rational dflt);
  // Rotation of the (e_0, e_1) plane by (cos, sin) = (a, b) with a^2+b^2 = 1;
  // identity on coordinates >= 2.
  static Operator rotation(Rational cos_part, Rational sin_part);
  static Operator scalar_multiple(Rational scalar, Operator inner);
  // Left acts on coordinates [0, offset), right on [offset, inf), each
  // relabeled from 0. The space norm is the max of the block norms.
  static Operator direct_sum(Operator left, Operator right, std::int64_t offset);
  // Factor j acts on the width_j coordinates starting at sum of earlier
  // widths; support beyond the total width is rejected. Block-max norm.
  static Operator product(std::vector<Operator> factors, std::vector<std::int64_t> widths);

  OperatorKind kind() const;
  IndexDomain domain() const;
  SeqVector apply(const SeqVector& v) const;
  Rational norm_bound(NormKind k) const;
  std::string describe() const;

  // Leaf parameter accessors; throw DomainError on kind mismatch.
  const std::vector<Rational>& weight_prefix() const;
  const Rational& weight_tail() const;
  const Rational& rotation_cos() const;
  const Rational& rotation_sin() const;
  const Rational& scalar() const;
  const Operator& inner() const;

  // Composite structure. For DirectSum the second block has no width (it is
  // unbounded); for Product every block is bounded.
  std::vector<OperatorBlock> blocks() const;

  friend bool operator==(const Operator& a, const Operator& b);

  struct Data;

 private:
  explicit Operator(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

struct OperatorBlock {
  Operator op;
  std::int64_t start;
  std::optional<std::int64_t> width;
};

// T^n v for n >= 0 by iterated application.
SeqVector apply_power(const Operator& T, SeqVector v, std::int64_t n);

// Exact two-sided inverse within the enumeration, when one exists.
std::optional<Operator> inverse(const Operator& T);

// A right inverse S (T o S = identity) together with a certified contraction
// factor: ||S v|| <= contraction * ||v|| under the given norm.
struct RightInverseSpec {
  Operator s;
  Rational contraction;
};

// Contracting right inverse under norm k (contraction < 1), when one exists.
// The contraction factor depends on the norm; the structural S does not.
std::optional<RightInverseSpec> right_inverse(const Operator& T, NormKind k);

// Space norm of v in the space T acts on: plain sequence norm for leaf
// operators, max over block norms (recursively) for DirectSum/Product.
std::strong_ordering space_norm_compare(const Operator& T, const SeqVector& v,
                                        const Rational& bound, NormKind k);
bool space_norm_less(const Operator& T, const SeqVector& v, const Rational& bound, NormKind k);
bool space_norm_leq(const Operator& T, const SeqVector& v, const Rational& bound, NormKind k);
Rational space_norm_upper_bound(const Operator& T, const SeqVector& v, NormKind k);
std::optional<Rational> space_norm_exact(const Operator& T, const SeqVector& v, NormKind k);

}  // namespace lindyn
