#include "lindyn/fhc.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "lindyn/errors.hpp"

namespace lindyn {

namespace {

std::string class_tag(std::size_t p) { return "fhc class " + std::to_string(p); }

// Dyadic values admitted at enumeration level l, in a fixed order:
// denominators 2^0..2^l, numerators ascending, lowest terms only.
std::vector<Rational> level_values(std::int64_t l) {
  std::vector<Rational> vals;
  for (std::int64_t d = 0; d <= l; ++d) {
    for (std::int64_t m = -l; m <= l; ++m) {
      if (m == 0) continue;
      if (d > 0 && m % 2 == 0) continue;
      vals.push_back(Rational(m) * Rational::pow2(-d));
    }
  }
  return vals;
}

bool value_in_level(const Rational& q, std::int64_t l) {
  if (q.is_zero()) return false;
  const mpz_class an = abs(q.num());
  if (cmp(an, static_cast<long>(l)) > 0) return false;
  const mpz_class den = q.den();
  if (mpz_popcount(den.get_mpz_t()) != 1) return false;
  return mpz_sizeinbase(den.get_mpz_t(), 2) - 1 <= static_cast<std::size_t>(l);
}

// Visits the vectors that level l adds (supports inside [0, l-1] by size then
// lexicographic order, entry assignments in value order, skipping everything
// level l-1 already produced). Returns false if the visitor stopped early.
bool walk_level(std::int64_t l, const std::function<bool(const SeqVector&)>& visit) {
  const std::vector<Rational> vals = level_values(l);
  const std::int64_t nvals = static_cast<std::int64_t>(vals.size());
  for (std::int64_t size = 1; size <= l; ++size) {
    std::vector<std::int64_t> idx(static_cast<std::size_t>(size));
    for (std::int64_t i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      std::vector<std::int64_t> pick(static_cast<std::size_t>(size), 0);
      while (true) {
        const bool support_is_old = idx.back() <= l - 2;
        bool values_are_old = true;
        SeqVector v(IndexDomain::Naturals);
        for (std::size_t i = 0; i < idx.size(); ++i) {
          const Rational& q = vals[static_cast<std::size_t>(pick[i])];
          values_are_old = values_are_old && value_in_level(q, l - 1);
          v.set_entry(idx[i], q);
        }
        if (!(support_is_old && values_are_old)) {
          if (!visit(v)) return false;
        }
        std::size_t pos = pick.size();
        while (pos > 0 && pick[pos - 1] == nvals - 1) pick[--pos] = 0;
        if (pos == 0) break;
        ++pick[pos - 1];
      }
      std::int64_t pos = size - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == l - size + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (std::int64_t i = pos + 1; i < size; ++i) {
        idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
      }
    }
  }
  return true;
}

}  // namespace

ChainThroughRecord chain_through(const SeqVector& xp, const Rational& delta_p,
                                 const ConnectFactory& factory, const Operator& T,
                                 NormKind k, std::int64_t min_rp) {
  if (delta_p <= Rational(0)) throw DomainError("through-chain tolerance must be positive");
  if (min_rp < 1) throw DomainError("minimal half-length must be at least 1");
  const Rational half = delta_p / Rational(2);
  const ConnectChains cc = factory(xp, half);
  const SeqVector zero = SeqVector::zero(T.domain());
  if (!(cc.from_zero.points.front() == zero) || !(cc.from_zero.points.back() == xp) ||
      !(cc.to_zero.points.front() == xp) || !(cc.to_zero.points.back() == zero)) {
    throw DomainError("connector chains must run 0 -> x_p and x_p -> 0 exactly");
  }
  const std::int64_t l_up = static_cast<std::int64_t>(cc.from_zero.points.size());
  const std::int64_t l_down = static_cast<std::int64_t>(cc.to_zero.points.size());
  std::int64_t rp = min_integer_exceeding(Rational(4) / delta_p);
  rp = std::max({rp, l_up - 1, l_down, min_rp});
  const std::int64_t np = 2 * rp;
  std::vector<SeqVector> pts(static_cast<std::size_t>(np), zero);
  for (std::int64_t i = 0; i < l_up; ++i) {
    pts[static_cast<std::size_t>(rp + 1 - l_up + i)] = cc.from_zero.points[static_cast<std::size_t>(i)];
  }
  for (std::int64_t i = 0; i < l_down; ++i) {
    pts[static_cast<std::size_t>(rp + i)] = cc.to_zero.points[static_cast<std::size_t>(i)];
  }
  Chain whole = validate_chain(T, std::move(pts), half, k);
  ChainThroughRecord rec;
  rec.points = std::move(whole.points);
  rec.rp = rp;
  rec.delta_p = delta_p;
  rec.kind = k;
  if (!(rec.points[static_cast<std::size_t>(rp)] == xp)) {
    throw CertificateError("through-chain midpoint does not hit its target");
  }
  return rec;
}

PseudoOrbit gamma_pseudo_orbit(std::size_t p, const DensitySchedule& schedule,
                               const SeqVector& prior_sum, const ChainThroughRecord& rec,
                               const Operator& T, std::int64_t horizon, NormKind k,
                               GammaCaseStats* stats) {
  if (p >= schedule.classes()) throw DomainError("schedule class out of range");
  if (horizon < 0) throw DomainError("horizon must be nonnegative");
  const std::int64_t np = schedule.block_sizes[p];
  if (static_cast<std::int64_t>(rec.points.size()) != np) {
    throw DomainError("through-chain length does not match the schedule block size");
  }
  const Rational delta = rec.delta_p;
  const Rational half = delta / Rational(2);
  const Rational two(2);
  std::vector<SeqVector> pts;
  pts.reserve(static_cast<std::size_t>(horizon) + 1);
  SeqVector wn = prior_sum;
  for (std::int64_t n = 0; n <= horizon; ++n) {
    if (n > 0) wn = T.apply(wn);
    if (!space_norm_less(T, wn, two, k)) {
      throw CertificateError(class_tag(p) + ": orbit surrogate ||T^n(prior sum)|| < 2 failed at index " +
                             std::to_string(n));
    }
    const auto bc = schedule.block_coordinates(n);
    if (bc.has_value() && bc->first == p) {
      const std::int64_t j = bc->second;
      const Rational coeff = j <= rec.rp ? Rational(j, rec.rp) : Rational(np - j, rec.rp);
      SeqVector g = rec.points[static_cast<std::size_t>(j)];
      g.add_scaled(-coeff, wn);
      pts.push_back(std::move(g));
    } else {
      pts.push_back(SeqVector::zero(T.domain()));
    }
  }
  GammaCaseStats st;
  for (std::int64_t n = 0; n < horizon; ++n) {
    const SeqVector dv = T.apply(pts[static_cast<std::size_t>(n)]) - pts[static_cast<std::size_t>(n) + 1];
    const auto bc = schedule.block_coordinates(n);
    const bool mine = bc.has_value() && bc->first == p;
    std::size_t family = 0;
    Rational bound;
    if (!mine) {
      family = 0;
    } else if (bc->second == np - 1) {
      family = 4;
      bound = half;
    } else if (bc->second < rec.rp) {
      family = 1;
      bound = delta;
    } else if (bc->second == rec.rp) {
      family = 2;
      bound = delta;
    } else {
      family = 3;
      bound = delta;
    }
    if (family == 0) {
      if (!dv.is_zero()) {
        throw CertificateError(class_tag(p) + ": off-block defect is not exactly zero at index " +
                               std::to_string(n));
      }
    } else {
      if (!space_norm_less(T, dv, bound, k)) {
        throw CertificateError(class_tag(p) + ": defect family " + std::to_string(family + 1) +
                               " exceeds its bound " + bound.str() + " at index " +
                               std::to_string(n));
      }
      const Rational ub = space_norm_upper_bound(T, dv, k);
      if (st.worst[family] < ub) st.worst[family] = ub;
    }
    ++st.counts[family];
  }
  if (stats != nullptr) *stats = st;
  return validate_pseudo_orbit(T, std::move(pts), delta, k);
}

FhcCertificate construct_fhc_vector(const Operator& T, const DenseSeq& dense, std::int64_t P,
                                    std::optional<std::int64_t> horizon,
                                    const ConnectFactory& factory, NormKind k) {
  if (P < 0) throw DomainError("need at least one dense target");
  std::vector<SeqVector> targets;
  std::vector<Rational> eps;
  std::vector<Rational> del;
  std::vector<ChainThroughRecord> recs;
  std::vector<std::int64_t> sizes;
  std::int64_t min_rp = 1;
  for (std::int64_t p = 0; p <= P; ++p) {
    targets.push_back(dense(p));
    eps.push_back(Rational::pow2(-p));
    del.push_back(shadowing_modulus(T, Rational::pow2(-(p + 1)), k));
    ChainThroughRecord rec = chain_through(targets.back(), del.back(), factory, T, k, min_rp);
    min_rp = rec.rp + 1;
    sizes.push_back(2 * rec.rp);
    recs.push_back(std::move(rec));
  }
  FhcCertificate cert;
  cert.schedule = build_schedule(sizes);
  cert.horizon = horizon.value_or(5 * cert.schedule.period);
  if (cert.horizon < cert.schedule.period) {
    throw DomainError("horizon must cover at least one schedule period");
  }
  const std::int64_t h = cert.horizon;
  SeqVector zsum = SeqVector::zero(T.domain());
  for (std::int64_t p = 0; p <= P; ++p) {
    const auto sp = static_cast<std::size_t>(p);
    FhcClassRecord r;
    r.p = sp;
    r.target = targets[sp];
    r.eps_p = eps[sp];
    r.delta_p = del[sp];
    r.rp = recs[sp].rp;
    const PseudoOrbit gamma =
        gamma_pseudo_orbit(sp, cert.schedule, zsum, recs[sp], T, h, k, &r.gamma_stats);
    const ShadowCertificate sc = shadow_right_inverse(T, gamma, k);
    r.zp = sc.shadow;
    r.shadow_max_error = sc.max_error;
    r.shadow_analytic = sc.analytic_bound;
    if (!space_norm_less(T, r.zp, r.eps_p, k)) {
      throw CertificateError(class_tag(sp) + ": property a failed at index 0 (||z_p|| not below " +
                             r.eps_p.str() + ")");
    }
    r.zp_norm = space_norm_upper_bound(T, r.zp, k);
    SeqVector cur = r.zp;
    for (std::int64_t n = 0; n <= h; ++n) {
      if (n > 0) cur = T.apply(cur);
      const auto bc = cert.schedule.block_coordinates(n);
      if (bc.has_value() && bc->first == sp) continue;
      if (!space_norm_less(T, cur, r.eps_p, k)) {
        throw CertificateError(class_tag(sp) + ": property c failed at index " + std::to_string(n));
      }
      const Rational ub = space_norm_upper_bound(T, cur, k);
      if (r.worst_off_block_norm < ub) r.worst_off_block_norm = ub;
      ++r.off_block_checks;
    }
    zsum.add_scaled(Rational(1), r.zp);
    cur = zsum;
    for (std::int64_t n = 0; n <= h; ++n) {
      if (n > 0) cur = T.apply(cur);
      const auto bc = cert.schedule.block_coordinates(n);
      if (!(bc.has_value() && bc->first == sp && bc->second == r.rp)) continue;
      const SeqVector dv = cur - r.target;
      if (!space_norm_less(T, dv, r.eps_p, k)) {
        throw CertificateError(class_tag(sp) + ": property b failed at index " + std::to_string(n));
      }
      const Rational ub = space_norm_upper_bound(T, dv, k);
      if (r.worst_orbit_sum_error < ub) r.worst_orbit_sum_error = ub;
      ++r.orbit_sum_checks;
    }
    if (r.orbit_sum_checks == 0) {
      throw CertificateError(class_tag(sp) + ": horizon misses every block midpoint");
    }
    cert.classes.push_back(std::move(r));
  }
  cert.z = zsum;
  cert.z_norm = space_norm_upper_bound(T, zsum, k);
  if (!space_norm_less(T, zsum, Rational(2), k)) {
    throw CertificateError("fhc vector norm is not strictly below 2");
  }
  for (std::int64_t p = 0; p <= P; ++p) {
    const auto sp = static_cast<std::size_t>(p);
    FhcVisitRecord v;
    v.p = sp;
    v.radius = eps[sp] / Rational(2);
    for (const std::int64_t m : cert.schedule.members(sp, 0, h - recs[sp].rp)) {
      v.expected.push_back(m + recs[sp].rp);
    }
    cert.visits.push_back(std::move(v));
  }
  SeqVector cur = cert.z;
  for (std::int64_t n = 1; n <= h; ++n) {
    cur = T.apply(cur);
    for (auto& v : cert.visits) {
      if (space_norm_less(T, cur - targets[v.p], v.radius, k)) v.visits.push_back(n);
    }
  }
  for (auto& v : cert.visits) {
    v.contains_expected =
        std::includes(v.visits.begin(), v.visits.end(), v.expected.begin(), v.expected.end());
    if (!v.contains_expected) {
      throw CertificateError(class_tag(v.p) + ": expected visit times are not all realized");
    }
    v.density = Rational(static_cast<long>(v.visits.size()), h);
  }
  return cert;
}

std::vector<std::int64_t> visit_times(const Operator& T, const SeqVector& z, const Ball& ball,
                                      std::int64_t n_max, NormKind k) {
  if (n_max < 1) throw DomainError("visit window must be nonempty");
  std::vector<std::int64_t> out;
  SeqVector cur = z;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    cur = T.apply(cur);
    if (ball_contains(T, ball, cur, k)) out.push_back(n);
  }
  return out;
}

Rational visit_density(const Operator& T, const SeqVector& z, const Ball& ball,
                       std::int64_t n_max, NormKind k) {
  return Rational(static_cast<long>(visit_times(T, z, ball, n_max, k).size()), n_max);
}

SeqVector dense_seq_element(std::int64_t p) {
  if (p < 0) throw DomainError("dense sequence index must be nonnegative");
  if (p == 0) return SeqVector::zero(IndexDomain::Naturals);
  std::int64_t remaining = p;
  SeqVector found(IndexDomain::Naturals);
  for (std::int64_t l = 1;; ++l) {
    const bool stopped = !walk_level(l, [&](const SeqVector& v) {
      if (--remaining == 0) {
        found = v;
        return false;
      }
      return true;
    });
    if (stopped) return found;
  }
}

}  // namespace lindyn
