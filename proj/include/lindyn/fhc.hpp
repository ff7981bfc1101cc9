#pragma once

#include <array>

#include "lindyn/density.hpp"
#include "lindyn/shadowing.hpp"

namespace lindyn {

// Through-chain record for one class: points x^0 .. x^(N_p - 1) forming a
// (delta_p/2)-chain 0 -> 0 with x^(R_p) = x_p exactly. Each half is a
// connector chain zero-padded to length R_p, and 1/R_p < delta_p/4 so the
// interpolation ramps stay within budget.
struct ChainThroughRecord {
  std::vector<SeqVector> points;
  std::int64_t rp = 0;
  Rational delta_p;
  NormKind kind = NormKind::One;
};

ChainThroughRecord chain_through(const SeqVector& xp, const Rational& delta_p,
                                 const ConnectFactory& factory, const Operator& T,
                                 NormKind k, std::int64_t min_rp = 1);

// Defect statistics of a gamma pseudo orbit, one slot per defect family:
//   0: off-block steps (defect exactly zero),
//   1: ascending ramp steps (bound delta_p),
//   2: the midpoint crossing (bound delta_p),
//   3: descending ramp steps (bound delta_p),
//   4: block exit steps (bound delta_p / 2).
struct GammaCaseStats {
  std::array<std::int64_t, 5> counts{};
  std::array<Rational, 5> worst{};
};

// The class-p interpolated pseudo orbit over [0, horizon]:
//   gamma_n = x^j - c_j * T^n(prior_sum)   inside own blocks (n = m + j),
//   gamma_n = 0                            elsewhere,
// with c_j = j/R_p ascending and (N_p - j)/R_p descending. Every defect is
// certified against its family bound and the orbit-norm surrogate
// ||T^n(prior_sum)|| < 2 is checked at every index; the result is a valid
// delta_p-pseudo orbit.
PseudoOrbit gamma_pseudo_orbit(std::size_t p, const DensitySchedule& schedule,
                               const SeqVector& prior_sum, const ChainThroughRecord& rec,
                               const Operator& T, std::int64_t horizon, NormKind k,
                               GammaCaseStats* stats = nullptr);

struct FhcClassRecord {
  std::size_t p = 0;
  SeqVector target;  // x_p
  Rational eps_p;    // 2^-p
  Rational delta_p;  // shadowing modulus at eps_p / 2
  std::int64_t rp = 0;
  SeqVector zp;       // class increment, shadow of the gamma orbit
  Rational zp_norm;   // certified ||z_p|| < eps_p
  Rational shadow_max_error;
  Rational shadow_analytic;
  Rational worst_orbit_sum_error;  // max ||T^(m+R_p)(z_0+..+z_p) - x_p||, < eps_p
  std::int64_t orbit_sum_checks = 0;
  Rational worst_off_block_norm;  // max ||T^n(z_p)|| off own blocks, < eps_p
  std::int64_t off_block_checks = 0;
  GammaCaseStats gamma_stats;
};

struct FhcVisitRecord {
  std::size_t p = 0;
  Rational radius;                     // eps_p / 2
  std::vector<std::int64_t> expected;  // (Delta_p + R_p) clipped to [1, horizon]
  std::vector<std::int64_t> visits;    // n in [1, horizon] with T^n(z) in the ball
  bool contains_expected = false;
  Rational density;  // |visits| / horizon
};

struct FhcCertificate {
  SeqVector z;
  Rational z_norm;  // certified bound, strictly below 2
  DensitySchedule schedule;
  std::int64_t horizon = 0;
  std::vector<FhcClassRecord> classes;
  std::vector<FhcVisitRecord> visits;
};

using DenseSeq = std::function<SeqVector(std::int64_t)>;

// Runs the full induction for classes 0..P: through-chains, gamma orbits,
// shadows z_p, and the three per-class properties
//   (a) ||z_p|| < 2^-p,
//   (b) ||T^(m+R_p)(z_0+..+z_p) - x_p|| < 2^-p for every block start m,
//   (c) ||T^n(z_p)|| < 2^-p off the class's own blocks,
// then tabulates the visit times of z = sum z_p to ball(x_p, 2^-(p+1)).
// Any violated check aborts with a CertificateError naming the class, the
// property, and the index.
FhcCertificate construct_fhc_vector(const Operator& T, const DenseSeq& dense, std::int64_t P,
                                    std::optional<std::int64_t> horizon,
                                    const ConnectFactory& factory, NormKind k);

// n in [1, n_max] with T^n(z) strictly inside the ball.
std::vector<std::int64_t> visit_times(const Operator& T, const SeqVector& z, const Ball& ball,
                                      std::int64_t n_max, NormKind k);
// Exact visit count ratio |visit_times| / n_max.
Rational visit_density(const Operator& T, const SeqVector& z, const Ball& ball,
                       std::int64_t n_max, NormKind k);

// Deterministic injective enumeration of a dense countable family of finitely
// supported vectors: index 0 is the zero vector, and level l >= 1 appends (in
// a fixed order) every vector with support inside [0, l-1] and entries m/2^d
// in lowest terms, |m| <= l, d <= l, that no earlier level listed.
SeqVector dense_seq_element(std::int64_t p);

}  // namespace lindyn
