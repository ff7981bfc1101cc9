#pragma once

#include <functional>
#include <optional>

#include "lindyn/operator_spec.hpp"
#include "lindyn/rng.hpp"

namespace lindyn {

// Finite epsilon-chain for an operator T: consecutive points satisfy
// ||T(x_i) - x_{i+1}|| < epsilon, strictly, under T's space norm. The defects
// list records certified per-step upper bounds (exact for norms One and
// Infinity, ceil-sqrt bounds for Two; the strict comparison behind validation
// is always exact either way).
struct Chain {
  std::vector<SeqVector> points;
  Rational epsilon;
  std::vector<Rational> defects;
  NormKind kind = NormKind::One;
};

// Recomputes every step defect and certifies the strict bound, or throws
// ChainError with the first violating step index.
Chain validate_chain(const Operator& T, std::vector<SeqVector> points,
                     const Rational& eps, NormKind k);

// Builds a return chain (point -> point) at the requested tolerance.
using ReturnChainFactory =
    std::function<Chain(const SeqVector& point, const Rational& eps)>;

// Factory for operators whose points are near-fixed: returns the length-1
// chain [p, p], which validates iff ||T(p) - p|| < eps.
ReturnChainFactory trivial_return_factory(const Operator& T, NormKind k);
// Factory wrapping isometry_return_chain.
ReturnChainFactory isometry_return_factory(const Operator& T, NormKind k);

// lambda * chain: tolerance epsilon for |lambda| <= 1, |lambda|*epsilon above.
Chain scale_chain(const Chain& c, const Rational& lambda, const Operator& T, NormKind k);

// Chain from x to lambda*x along the straight-line interpolation
// x^j = (1 - j/k) x + (j/k) lambda x, splicing a return chain of tolerance
// eps/2 at each interpolation node; k is the minimal integer with
// ||x - lambda x|| <= k*(eps/2). Each junction defect stays strictly below
// eps because the spliced return chain's final step is strictly below eps/2.
Chain span_connect_chain(const SeqVector& x, const Rational& lambda, const Rational& eps,
                         const Operator& T, const ReturnChainFactory& returns, NormKind k);

// Chain from 0 to x: a first hop 0 -> lambda'x with ||lambda' x|| <= eps/2,
// then the interpolation argument from lambda'x up to x at tolerance eps/2.
Chain zero_to_point_chain(const SeqVector& x, const Rational& eps, const Operator& T,
                          const ReturnChainFactory& returns, NormKind k);

// Return chain for an invertible T with certified ||T|| = ||T^{-1}|| = 1:
//   x_j = T^j(x) + (j/n)(T^{j-n}(x) - T^j(x)),
// closing exactly at x_n = x, with every defect at most 2||x||/n < eps.
// n is minimal with ||x|| < n*(eps/2) unless an explicit (>= minimal) step
// count is requested.
Chain isometry_return_chain(const Operator& T, const SeqVector& x, const Rational& eps,
                            NormKind k, std::optional<std::int64_t> steps = std::nullopt);

// Pointwise sum of two chains that both terminate at 0 (the shorter is padded
// at its end with zeros); tolerance adds.
Chain sum_chain(const Chain& cx, const Chain& cy, const Operator& T, NormKind k);

// From a return chain c = {x_0=x,...,x_N=x} builds the return chain at Tx:
// {Tx, x_2, x_3, ..., x_N, Tx}, a (2*max(||T||,1)*eps)-chain.
Chain image_chain(const Chain& c, const Operator& T, NormKind k);

// Reversed point list, certified as a chain for T^{-1} at tolerance
// ||T^{-1}||*eps.
Chain inverse_chain(const Chain& c, const Operator& T, NormKind k);

// Chain in a Product space from (x_1,...,x_k) back to itself through
// (0,...,0). Factors run their "to zero" chains sequentially while later
// factors evolve under their operators and earlier ones sit at 0, so the
// stage chain for factor j must start at T_j^{E_j}(x_j) where E_j is the
// number of steps elapsed before stage j (checked exactly). The return from
// zero interleaves the per-factor "from zero" chains, front-padded with
// zeros to a common length. Tolerance is the max of the input tolerances
// (block-max space norm).
Chain product_chain(const std::vector<Chain>& stage_to_zero,
                    const std::vector<Chain>& from_zero, const Operator& T, NormKind k);

enum class SumBlock { Left, Right };

// Coordinate projection of a DirectSum chain onto one block; alpha is the
// norm-splitting constant (1 for these block-max norms). Endpoints must
// already lie in the target block; tolerance becomes alpha*eps.
Chain projection_chain(const Chain& c, const Rational& alpha, const Operator& T,
                       SumBlock which, NormKind k);

// Certificate that no valid eps-chain starting at x returns to x when T is a
// certified proper contraction: eps = (||x|| - ||Tx|| - delta)(1 - B) with
// B = certified ||T|| bound < 1. Any eps-chain x_0 = x, ..., x_N (N >= 1) has
// ||x_N|| <= ||T^N x|| + eps/(1-B) <= ||x|| - delta < ||x||.
struct NoReturnCertificate {
  Rational eps;
  Rational delta;
  Rational norm_x;       // exact ||x||
  Rational norm_tx;      // exact ||Tx||
  Rational contraction;  // certified bound B < 1
  NormKind kind;
};

NoReturnCertificate contraction_no_return_certificate(const Operator& T, const SeqVector& x,
                                                      const Rational& delta, NormKind k);

// ||T^N x|| (certified) + eps/(1-B), the terminal-norm bound for length-N
// eps-chains from x.
Rational no_return_terminal_bound(const NoReturnCertificate& cert, const Operator& T,
                                  const SeqVector& x, std::int64_t n);

// Randomized falsification search over valid eps-chains from x: every trial
// samples grid defects strictly below eps, walks the chain, and checks the
// terminal norm strictly below ||x|| and within the analytic bound.
struct NoReturnSearchResult {
  std::uint64_t trials = 0;
  bool all_below_norm_x = true;
  bool all_within_analytic_bound = true;
  Rational worst_terminal_norm;  // max over trials, exact
  std::uint64_t worst_trial = 0;
  std::int64_t worst_length = 0;
};

NoReturnSearchResult contraction_no_return_search(const Operator& T, const SeqVector& x,
                                                  const NoReturnCertificate& cert,
                                                  std::uint64_t trials,
                                                  std::int64_t max_length,
                                                  std::int64_t grid_denominator,
                                                  std::int64_t window, std::uint64_t seed);

// Smallest n >= 1 with ||v|| < n*unit (strict) resp. <= n*unit, under T's
// space norm; exact despite irrational l2 norms.
std::int64_t min_steps_strict(const Operator& T, const SeqVector& v, const Rational& unit,
                              NormKind k);
std::int64_t min_steps_nonstrict(const Operator& T, const SeqVector& v, const Rational& unit,
                                 NormKind k);

}  // namespace lindyn
