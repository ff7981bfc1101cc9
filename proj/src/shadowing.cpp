#include "lindyn/shadowing.hpp"

#include <string>
#include <utility>

#include "lindyn/errors.hpp"

namespace lindyn {

namespace {

// Forward-iterates the shadow against the points, certifying every step
// error at most `analytic` by exact comparison. Returns the smaller of the
// two certified sup bounds (the max per-step upper bound can exceed analytic
// only through ceil-sqrt granularity under the l2 norm).
Rational certified_error_sweep(const Operator& T, const SeqVector& shadow,
                               const std::vector<SeqVector>& points, const Rational& analytic,
                               NormKind k) {
  SeqVector cur = shadow;
  Rational worst(0);
  for (std::size_t n = 0; n < points.size(); ++n) {
    if (n > 0) cur = T.apply(cur);
    const SeqVector err = cur - points[n];
    if (!space_norm_leq(T, err, analytic, k)) {
      throw CertificateError("shadow error exceeds the analytic bound " + analytic.str() +
                             " at index " + std::to_string(n));
    }
    const Rational ub = space_norm_upper_bound(T, err, k);
    if (worst < ub) worst = ub;
  }
  return worst <= analytic ? worst : analytic;
}

ShadowCertificate solve(const Operator& T, const PseudoOrbit& po, NormKind k) {
  if (right_inverse(T, k).has_value()) return shadow_right_inverse(T, po, k);
  return shadow_hyperbolic(T, po, k);
}

}  // namespace

PseudoOrbit validate_pseudo_orbit(const Operator& T, std::vector<SeqVector> points,
                                  const Rational& delta, NormKind k) {
  if (points.empty()) throw DomainError("a pseudo orbit needs at least one point");
  if (delta.sign() < 0) throw DomainError("pseudo orbit tolerance must be nonnegative");
  for (std::size_t n = 0; n + 1 < points.size(); ++n) {
    const SeqVector dv = T.apply(points[n]) - points[n + 1];
    if (!space_norm_leq(T, dv, delta, k)) {
      throw PseudoOrbitError(n, "step defect exceeds " + delta.str() + " (certified bound " +
                                    space_norm_upper_bound(T, dv, k).str() + ")");
    }
  }
  PseudoOrbit po;
  po.points = std::move(points);
  po.delta = delta;
  po.kind = k;
  return po;
}

PseudoOrbit concat_chains_to_pseudo_orbit(const std::vector<Chain>& chains,
                                          std::int64_t zero_pad,
                                          const SeqVector& tail_orbit_of,
                                          std::int64_t tail_len, const Operator& T, NormKind k,
                                          std::optional<Rational> delta) {
  if (zero_pad < 0 || tail_len < 0) throw DomainError("padding lengths must be nonnegative");
  const SeqVector zero = SeqVector::zero(T.domain());
  std::vector<SeqVector> pts;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const auto& c = chains[i];
    if (c.points.size() < 2) throw DomainError("cannot splice an empty chain");
    if (i > 0 && !(c.points.front() == zero)) {
      throw DomainError("spliced chain " + std::to_string(i) + " must start at 0");
    }
    if (i + 1 < chains.size() && !(c.points.back() == zero)) {
      throw DomainError("spliced chain " + std::to_string(i) + " must end at 0");
    }
    pts.insert(pts.end(), c.points.begin() + (i > 0 ? 1 : 0), c.points.end());
    if (i + 1 < chains.size()) {
      for (std::int64_t j = 0; j < zero_pad; ++j) pts.push_back(zero);
    }
  }
  if (pts.empty()) {
    pts.push_back(tail_orbit_of);
  } else if (!(pts.back() == tail_orbit_of)) {
    throw DomainError("tail orbit must start at the last spliced point");
  }
  SeqVector cur = pts.back();
  for (std::int64_t j = 0; j < tail_len; ++j) {
    cur = T.apply(cur);
    pts.push_back(cur);
  }
  Rational d;
  if (delta.has_value()) {
    d = *delta;
  } else {
    if (chains.empty()) throw DomainError("an explicit tolerance is needed without chains");
    d = chains.front().epsilon;
    for (const auto& c : chains) {
      if (d < c.epsilon) d = c.epsilon;
    }
  }
  return validate_pseudo_orbit(T, std::move(pts), d, k);
}

ShadowCertificate shadow_right_inverse(const Operator& T, const PseudoOrbit& po, NormKind k) {
  if (po.points.empty()) throw DomainError("cannot shadow an empty pseudo orbit");
  const auto ri = right_inverse(T, k);
  if (!ri.has_value()) {
    throw CapabilityError("no contracting right inverse available for " + T.describe());
  }
  const Rational s = ri->contraction;
  const Rational analytic = po.delta * s / (Rational(1) - s);
  const std::int64_t horizon = static_cast<std::int64_t>(po.points.size()) - 1;
  // shadow = x_0 + sum_{n=1..H} S^n (x_n - T x_{n-1}), folded backwards so
  // each defect passes through S exactly as many times as its index requires.
  SeqVector acc = SeqVector::zero(T.domain());
  for (std::int64_t n = horizon; n >= 1; --n) {
    SeqVector d = po.points[static_cast<std::size_t>(n)] -
                  T.apply(po.points[static_cast<std::size_t>(n - 1)]);
    d.add_scaled(Rational(1), acc);
    acc = ri->s.apply(d);
  }
  ShadowCertificate cert;
  cert.shadow = po.points.front() + acc;
  cert.horizon = horizon;
  cert.analytic_bound = analytic;
  cert.kind = k;
  cert.max_error = certified_error_sweep(T, cert.shadow, po.points, analytic, k);
  return cert;
}

ShadowCertificate shadow_hyperbolic(const Operator& T, const PseudoOrbit& po, NormKind k) {
  if (po.points.empty()) throw DomainError("cannot shadow an empty pseudo orbit");
  if (T.kind() != OperatorKind::DirectSum) {
    throw CapabilityError("hyperbolic solver needs a DirectSum splitting, got " + T.describe());
  }
  const auto bs = T.blocks();
  const Operator& ts = bs[0].op;
  const Operator& tu = bs[1].op;
  const std::int64_t offset = bs[1].start;
  const Rational cs = ts.norm_bound(k);
  if (!(cs < Rational(1))) {
    throw CapabilityError("left block is not a certified contraction (bound " + cs.str() + ")");
  }
  const auto tu_inv = inverse(tu);
  if (!tu_inv.has_value()) {
    throw CapabilityError("right block has no exact inverse: " + tu.describe());
  }
  const Rational cu = tu_inv->norm_bound(k);
  if (!(cu < Rational(1))) {
    throw CapabilityError("right block inverse is not a certified contraction (bound " +
                          cu.str() + ")");
  }
  const Rational one(1);
  const Rational stable_bound = po.delta / (one - cs);
  const Rational unstable_bound = po.delta * cu / (one - cu);
  const Rational analytic = stable_bound < unstable_bound ? unstable_bound : stable_bound;
  const std::int64_t horizon = static_cast<std::int64_t>(po.points.size()) - 1;
  // Stable component: the true orbit of x_0's left part. Unstable component:
  // x_H's right part pulled back through the inverse over the whole horizon.
  SeqVector shadow(T.domain());
  for (const auto& [i, q] : po.points.front().entries()) {
    if (i < offset) shadow.set_entry(i, q);
  }
  SeqVector wu(IndexDomain::Naturals);
  for (const auto& [i, q] : po.points.back().entries()) {
    if (i >= offset) wu.set_entry(i - offset, q);
  }
  wu = apply_power(*tu_inv, std::move(wu), horizon);
  for (const auto& [i, q] : wu.entries()) shadow.set_entry(i + offset, q);
  ShadowCertificate cert;
  cert.shadow = std::move(shadow);
  cert.horizon = horizon;
  cert.analytic_bound = analytic;
  cert.kind = k;
  cert.max_error = certified_error_sweep(T, cert.shadow, po.points, analytic, k);
  return cert;
}

Rational shadowing_modulus(const Operator& T, const Rational& eps, NormKind k) {
  if (eps <= Rational(0)) throw DomainError("shadowing modulus needs eps > 0");
  if (const auto ri = right_inverse(T, k)) {
    const Rational s = ri->contraction;
    return eps * (Rational(1) - s) / s;
  }
  if (T.kind() == OperatorKind::DirectSum) {
    const auto bs = T.blocks();
    const Rational cs = bs[0].op.norm_bound(k);
    const auto tu_inv = inverse(bs[1].op);
    if (cs < Rational(1) && tu_inv.has_value()) {
      const Rational cu = tu_inv->norm_bound(k);
      if (cu < Rational(1)) {
        const Rational one(1);
        const Rational f_stable = one / (one - cs);
        const Rational f_unstable = cu / (one - cu);
        return eps / (f_stable < f_unstable ? f_unstable : f_stable);
      }
    }
  }
  throw CapabilityError("no shadowing solver applies to " + T.describe());
}

Rational recompute_max_error(const Operator& T, const SeqVector& shadow,
                             const std::vector<SeqVector>& points, NormKind k) {
  if (points.empty()) throw DomainError("cannot re-iterate against an empty pseudo orbit");
  SeqVector cur = shadow;
  Rational worst(0);
  for (std::size_t n = 0; n < points.size(); ++n) {
    if (n > 0) cur = T.apply(cur);
    const Rational ub = space_norm_upper_bound(T, cur - points[n], k);
    if (worst < ub) worst = ub;
  }
  return worst;
}

bool ball_contains(const Operator& T, const Ball& b, const SeqVector& v, NormKind k) {
  return space_norm_less(T, v - b.center, b.radius, k);
}

ConnectChains doubling_shift_connect_chain(const SeqVector& target, const Rational& delta,
                                           NormKind k) {
  if (delta <= Rational(0)) throw DomainError("connector tolerance must be positive");
  if (target.domain() != IndexDomain::Naturals) {
    throw DomainError("the doubling shift acts on naturals-indexed sequences");
  }
  const Operator T = Operator::doubling_shift_fixed_line();
  const Operator S = Operator::weighted_forward_shift({}, Rational(1, 2));
  const SeqVector zero = SeqVector::zero(IndexDomain::Naturals);
  if (target.is_zero()) {
    const Chain trivial = validate_chain(T, {zero, zero}, delta, k);
    return {trivial, trivial};
  }

  // 0 -> target: hop onto S^j(target) with j minimal so the hop defect is
  // strictly below delta, then ride the exact orbit back up (T o S = id).
  std::vector<SeqVector> up{zero};
  SeqVector hop = target;
  std::int64_t drops = 0;
  while (!space_norm_less(T, hop, delta, k)) {
    hop = S.apply(hop);
    ++drops;
  }
  up.push_back(hop);
  for (std::int64_t i = 0; i < drops; ++i) {
    hop = T.apply(hop);
    up.push_back(hop);
  }
  if (!(up.back() == target)) throw CertificateError("doubling connector missed its target");
  Chain from_zero = validate_chain(T, std::move(up), delta, k);

  // target -> 0: the exact orbit collapses everything onto c*e_0 with
  // c = sum target_i 2^i after max_index steps, then a straight ramp down
  // in the minimal number of strict steps.
  std::vector<SeqVector> down{target};
  SeqVector cur = target;
  const std::int64_t m = target.max_index();
  for (std::int64_t i = 0; i < m; ++i) {
    cur = T.apply(cur);
    down.push_back(cur);
  }
  if (!cur.is_zero()) {
    if (cur.max_index() != 0) throw CertificateError("doubling orbit failed to collapse");
    const Rational c = cur.entry(0);
    const std::int64_t ramp = min_integer_exceeding(c.abs() / delta);
    for (std::int64_t i = 1; i <= ramp; ++i) {
      SeqVector p(IndexDomain::Naturals);
      p.set_entry(0, c * Rational(ramp - i, ramp));
      down.push_back(p);
    }
  }
  Chain to_zero = validate_chain(T, std::move(down), delta, k);
  return {std::move(from_zero), std::move(to_zero)};
}

ConnectFactory doubling_shift_connect_factory(NormKind k) {
  return [k](const SeqVector& target, const Rational& delta) {
    return doubling_shift_connect_chain(target, delta, k);
  };
}

ReturnChainFactory doubling_shift_return_factory(NormKind k) {
  return [k](const SeqVector& point, const Rational& eps) {
    const ConnectChains cc = doubling_shift_connect_chain(point, eps, k);
    std::vector<SeqVector> pts = cc.to_zero.points;
    pts.insert(pts.end(), cc.from_zero.points.begin() + 1, cc.from_zero.points.end());
    return validate_chain(Operator::doubling_shift_fixed_line(), std::move(pts), eps, k);
  };
}

MixingWitness mixing_witness(const Operator& T, const Ball& u, const Ball& v,
                             std::int64_t zero_pad, const ConnectFactory& factory,
                             NormKind k) {
  if (u.radius <= Rational(0) || v.radius <= Rational(0)) {
    throw DomainError("mixing witness needs balls of positive radius");
  }
  if (zero_pad < 0) throw DomainError("zero padding must be nonnegative");
  const Rational lambda = u.radius < v.radius ? u.radius : v.radius;
  const Rational eps = lambda / Rational(2);
  const Rational delta = shadowing_modulus(T, eps, k);
  const Chain to_zero = factory(u.center, delta).to_zero;
  const Chain from_zero = factory(v.center, delta).from_zero;
  if (!(to_zero.points.front() == u.center) || !(from_zero.points.back() == v.center)) {
    throw DomainError("connector chains must run source -> 0 and 0 -> target");
  }
  const PseudoOrbit po = concat_chains_to_pseudo_orbit({to_zero, from_zero}, zero_pad,
                                                       from_zero.points.back(), 0, T, k, delta);
  const ShadowCertificate cert = solve(T, po, k);
  MixingWitness w;
  w.z = cert.shadow;
  w.chain_to_zero_steps = static_cast<std::int64_t>(to_zero.points.size()) - 1;
  w.chain_from_zero_steps = static_cast<std::int64_t>(from_zero.points.size()) - 1;
  w.zero_pad = zero_pad;
  w.hitting_time = w.chain_to_zero_steps + zero_pad + w.chain_from_zero_steps;
  w.certificate = cert;
  if (!ball_contains(T, u, w.z, k)) {
    throw CertificateError("mixing witness escaped the source ball");
  }
  const SeqVector hit = apply_power(T, w.z, w.hitting_time);
  if (!ball_contains(T, v, hit, k)) {
    throw CertificateError("mixing witness missed the target ball at time " +
                           std::to_string(w.hitting_time));
  }
  return w;
}

ReturnOrbitWitness return_orbit_witness(const Operator& T, const SeqVector& x,
                                        const Rational& eps, const ReturnChainFactory& factory,
                                        std::int64_t repeats, NormKind k) {
  if (repeats < 1) throw DomainError("need at least one return repetition");
  if (eps <= Rational(0)) throw DomainError("return witness needs eps > 0");
  const Rational delta = shadowing_modulus(T, eps, k);
  const Chain rc = factory(x, delta);
  if (!(rc.points.front() == x) || !(rc.points.back() == x)) {
    throw DomainError("factory must produce a return chain at the given point");
  }
  const std::int64_t period = static_cast<std::int64_t>(rc.points.size()) - 1;
  std::vector<SeqVector> pts = rc.points;
  for (std::int64_t rep = 1; rep < repeats; ++rep) {
    pts.insert(pts.end(), rc.points.begin() + 1, rc.points.end());
  }
  const PseudoOrbit po = validate_pseudo_orbit(T, std::move(pts), delta, k);
  const ShadowCertificate cert = solve(T, po, k);
  const Rational two_eps = Rational(2) * eps;
  ReturnOrbitWitness w;
  w.z = cert.shadow;
  w.eps = eps;
  w.certificate = cert;
  SeqVector cur = cert.shadow;
  for (std::int64_t n = 1; n <= cert.horizon; ++n) {
    cur = T.apply(cur);
    if (n % period == 0) {
      if (!space_norm_less(T, cur - x, two_eps, k)) {
        throw CertificateError("return witness drifted outside 2*eps at time " +
                               std::to_string(n));
      }
      w.return_times.push_back(n);
    }
  }
  return w;
}

Rational l1_pseudo_orbit_defect(const Rational& delta, std::int64_t n) {
  if (delta <= Rational(0)) throw DomainError("the demo needs delta > 0");
  if (n < 0) throw DomainError("negative pseudo orbit index");
  const PolyFunction fn = PolyFunction::geometric_sum(delta, n);
  const PolyFunction fn1 = PolyFunction::geometric_sum(delta, n + 1);
  return (fn.shifted(1) - fn1).l1_norm_on_half_one();
}

Rational l1_nonshadowability_bound(const Rational& delta, std::int64_t n,
                                   const PolyFunction& g) {
  if (delta <= Rational(0)) throw DomainError("the demo needs delta > 0");
  if (n < 1) throw DomainError("the separation bound starts at n = 1");
  Rational harmonic(0);
  for (std::int64_t j = 1; j <= n; ++j) {
    harmonic += (Rational(1) - Rational::pow2(-j)) / Rational(j);
  }
  const Rational first = delta * harmonic;
  Rational maxc(0);
  for (const auto& c : g.coeffs()) {
    if (maxc < c.abs()) maxc = c.abs();
  }
  if (maxc.is_zero()) return first;
  const Rational tail = maxc * Rational(g.degree() + 1) *
                        (Rational(1) - Rational::pow2(-(n + 1))) / Rational(n + 1);
  return first - tail;
}

}  // namespace lindyn
