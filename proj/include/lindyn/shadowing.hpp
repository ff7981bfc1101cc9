#pragma once

#include "lindyn/chain.hpp"
#include "lindyn/poly.hpp"

namespace lindyn {

// Finite-horizon positive delta-pseudo orbit: points x_0..x_H with every step
// defect ||T(x_n) - x_{n+1}|| <= delta (non-strict, unlike chains).
struct PseudoOrbit {
  std::vector<SeqVector> points;
  Rational delta;
  NormKind kind = NormKind::One;
};

PseudoOrbit validate_pseudo_orbit(const Operator& T, std::vector<SeqVector> points,
                                  const Rational& delta, NormKind k);

// Splices chains (each ending at 0, each later one starting at 0), inserting
// zero_pad zeros between consecutive chains, then appends the true orbit of
// the final point for tail_len steps. Later chains drop their leading zero
// (the predecessor already sits at 0). delta defaults to the max chain
// tolerance.
PseudoOrbit concat_chains_to_pseudo_orbit(const std::vector<Chain>& chains,
                                          std::int64_t zero_pad,
                                          const SeqVector& tail_orbit_of,
                                          std::int64_t tail_len, const Operator& T,
                                          NormKind k,
                                          std::optional<Rational> delta = std::nullopt);

// Shadowing certificate: the recorded max_error is a certified upper bound on
// sup_n ||T^n(shadow) - x_n|| over the horizon (exact under norms One and
// Infinity); every step is additionally compared exactly against
// analytic_bound during construction.
struct ShadowCertificate {
  SeqVector shadow;
  std::int64_t horizon = 0;
  Rational max_error;
  Rational analytic_bound;
  NormKind kind = NormKind::One;
};

// Shadow by the right-inverse series shadow = x_0 + sum_n S^n(x_n - T x_{n-1})
// for a contracting right inverse (S, s); analytic bound delta*s/(1-s).
ShadowCertificate shadow_right_inverse(const Operator& T, const PseudoOrbit& po, NormKind k);

// Shadow for a hyperbolic DirectSum(contraction, dilation): the stable
// component follows the true orbit of x_0's stable part (error below
// delta/(1-c_s)); the unstable component pulls x_H's unstable part back
// through the horizon (error at most delta*c_u/(1-c_u)); block-max combines.
ShadowCertificate shadow_hyperbolic(const Operator& T, const PseudoOrbit& po, NormKind k);

// The modulus eps -> delta(eps) certifying positive shadowing for T:
// eps*(1-s)/s for the right-inverse solver, eps/max(1/(1-c_s), c_u/(1-c_u))
// for the hyperbolic one. CapabilityError when no solver applies.
Rational shadowing_modulus(const Operator& T, const Rational& eps, NormKind k);

// Independent re-iteration of the shadow against the points (test oracle).
Rational recompute_max_error(const Operator& T, const SeqVector& shadow,
                             const std::vector<SeqVector>& points, NormKind k);

struct Ball {
  SeqVector center;
  Rational radius;
};

// Strict membership ||v - center|| < radius under T's space norm.
bool ball_contains(const Operator& T, const Ball& b, const SeqVector& v, NormKind k);

// A pair of connecting chains through the origin at a common tolerance.
struct ConnectChains {
  Chain from_zero;  // 0 -> target
  Chain to_zero;    // target -> 0
};
using ConnectFactory =
    std::function<ConnectChains(const SeqVector& target, const Rational& delta)>;

// Connector for DoublingShiftFixedLine. 0 -> target: one hop onto
// S^(k-1)(target) with k minimal so the hop is a strict delta-defect, then the
// exact orbit collapses S-powers back to the target (T o S = id). target -> 0:
// the exact forward orbit lands on the invariant line at c*e_0 with
// c = sum target_i 2^i, then a straight ramp to 0 in minimal exact steps
// strictly below delta.
ConnectChains doubling_shift_connect_chain(const SeqVector& target, const Rational& delta,
                                           NormKind k);
ConnectFactory doubling_shift_connect_factory(NormKind k);
// Return chain target -> target through 0 (to_zero then from_zero spliced).
ReturnChainFactory doubling_shift_return_factory(NormKind k);

// Witness that T^(n+m+k)(U) meets V: shadows the pseudo-orbit
// [x -> 0 chain | k zeros | 0 -> y chain] at eps = lambda/2 and verifies both
// memberships exactly.
struct MixingWitness {
  SeqVector z;
  std::int64_t hitting_time = 0;
  std::int64_t chain_to_zero_steps = 0;
  std::int64_t chain_from_zero_steps = 0;
  std::int64_t zero_pad = 0;
  ShadowCertificate certificate;
};

MixingWitness mixing_witness(const Operator& T, const Ball& u, const Ball& v,
                             std::int64_t zero_pad, const ConnectFactory& factory,
                             NormKind k);

// Witness that x is non-wandering: shadows r concatenated return chains and
// certifies ||T^t(z) - x|| < 2*eps at every return time t.
struct ReturnOrbitWitness {
  SeqVector z;
  std::vector<std::int64_t> return_times;
  Rational eps;
  ShadowCertificate certificate;
};

ReturnOrbitWitness return_orbit_witness(const Operator& T, const SeqVector& x,
                                        const Rational& eps,
                                        const ReturnChainFactory& factory,
                                        std::int64_t repeats, NormKind k);

// Exact defect ||x*f_n - f_{n+1}||_1 of the multiplication-by-x pseudo orbit
// f_n = delta*(1 + x + ... + x^(n-1)) on L^1[1/2,1]; equals delta/2 at every n.
Rational l1_pseudo_orbit_defect(const Rational& delta, std::int64_t n);

// Exact lower bound on ||x^n g - f_n||_1: the harmonic-type sum
// delta * sum_{k=1..n} (1/k)(1 - 2^-k) minus the coefficient bound
// max|g| * (deg g + 1) * (1 - 2^-(n+1))/(n+1) on ||x^n g||_1. Diverges in n,
// so no orbit shadows the pseudo orbit.
Rational l1_nonshadowability_bound(const Rational& delta, std::int64_t n,
                                   const PolyFunction& g);

}  // namespace lindyn
