#include "lindyn/chain.hpp"

#include <algorithm>
#include <map>

namespace lindyn {

Chain validate_chain(const Operator& T, std::vector<SeqVector> points,
                     const Rational& eps, NormKind k) {
  if (points.size() < 2) throw DomainError("a chain needs at least 2 points");
  if (eps.sign() <= 0) throw DomainError("chain tolerance must be positive");
  std::vector<Rational> defects;
  defects.reserve(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const SeqVector dv = T.apply(points[i]) - points[i + 1];
    if (!space_norm_less(T, dv, eps, k)) {
      throw ChainError(i, "chain defect at step " + std::to_string(i) + " is " +
                              space_norm_upper_bound(T, dv, k).str() +
                              " (certified bound), not strictly below " + eps.str());
    }
    defects.push_back(space_norm_upper_bound(T, dv, k));
  }
  return Chain{std::move(points), eps, std::move(defects), k};
}

ReturnChainFactory trivial_return_factory(const Operator& T, NormKind k) {
  return [T, k](const SeqVector& p, const Rational& eps) {
    return validate_chain(T, {p, p}, eps, k);
  };
}

ReturnChainFactory isometry_return_factory(const Operator& T, NormKind k) {
  return [T, k](const SeqVector& p, const Rational& eps) {
    return isometry_return_chain(T, p, eps, k);
  };
}

std::int64_t min_steps_strict(const Operator& T, const SeqVector& v, const Rational& unit,
                              NormKind k) {
  if (unit.sign() <= 0) throw DomainError("min_steps needs a positive unit");
  std::int64_t n = floor_to_int64(space_norm_upper_bound(T, v, k) / unit) + 2;
  if (n < 1) n = 1;
  while (n > 1 && space_norm_less(T, v, Rational(static_cast<long>(n - 1)) * unit, k)) --n;
  return n;
}

std::int64_t min_steps_nonstrict(const Operator& T, const SeqVector& v, const Rational& unit,
                                 NormKind k) {
  if (unit.sign() <= 0) throw DomainError("min_steps needs a positive unit");
  std::int64_t n = floor_to_int64(space_norm_upper_bound(T, v, k) / unit) + 1;
  if (n < 1) n = 1;
  while (n > 1 && space_norm_leq(T, v, Rational(static_cast<long>(n - 1)) * unit, k)) --n;
  return n;
}

Chain scale_chain(const Chain& c, const Rational& lambda, const Operator& T, NormKind k) {
  const Rational mag = lambda.abs();
  const Rational eps_out = mag <= Rational(1) ? c.epsilon : mag * c.epsilon;
  std::vector<SeqVector> points;
  points.reserve(c.points.size());
  for (const auto& p : c.points) points.push_back(lambda * p);
  return validate_chain(T, std::move(points), eps_out, k);
}

Chain span_connect_chain(const SeqVector& x, const Rational& lambda, const Rational& eps,
                         const Operator& T, const ReturnChainFactory& returns, NormKind k) {
  if (eps.sign() <= 0) throw DomainError("span connection needs a positive tolerance");
  const Rational half = eps / Rational(2);
  const SeqVector target = lambda * x;
  const SeqVector diff = x - target;
  const std::int64_t segs = diff.is_zero() ? 1 : min_steps_nonstrict(T, diff, half, k);

  std::vector<SeqVector> nodes;
  nodes.reserve(static_cast<std::size_t>(segs) + 1);
  for (std::int64_t j = 0; j <= segs; ++j) {
    // x^j = (1 - j/segs) x + (j/segs) lambda x, exactly.
    SeqVector node = x;
    node.add_scaled(Rational(static_cast<long>(j), static_cast<long>(segs)), target - x);
    nodes.push_back(std::move(node));
  }

  std::vector<SeqVector> points;
  for (std::int64_t j = 0; j < segs; ++j) {
    Chain rc = [&] {
      try {
        return returns(nodes[static_cast<std::size_t>(j)], half);
      } catch (const Error& e) {
        throw Error("span connection: return-chain factory failed at node " +
                    std::to_string(j) + ": " + e.what());
      }
    }();
    if (!(rc.points.front() == nodes[static_cast<std::size_t>(j)]) ||
        !(rc.points.back() == nodes[static_cast<std::size_t>(j)])) {
      throw DomainError("span connection: factory must return a return chain at node " +
                        std::to_string(j));
    }
    // Splice all but the final point; the next node replaces it, which keeps
    // the junction defect below eps/2 (return step) + eps/2 (node spacing).
    points.insert(points.end(), rc.points.begin(), rc.points.end() - 1);
  }
  points.push_back(nodes.back());
  return validate_chain(T, std::move(points), eps, k);
}

Chain zero_to_point_chain(const SeqVector& x, const Rational& eps, const Operator& T,
                          const ReturnChainFactory& returns, NormKind k) {
  if (eps.sign() <= 0) throw DomainError("zero-to-point chain needs a positive tolerance");
  const SeqVector origin = SeqVector::zero(x.domain());
  if (x.is_zero()) return validate_chain(T, {origin, origin}, eps, k);
  const Rational half = eps / Rational(2);
  // Smallest m with ||x||/m <= eps/2; the hop 0 -> x/m then costs at most eps/2.
  const std::int64_t m = min_steps_nonstrict(T, x, half, k);
  const SeqVector first = Rational(1, static_cast<long>(m)) * x;
  Chain tail = span_connect_chain(first, Rational(static_cast<long>(m)), half, T, returns, k);
  std::vector<SeqVector> points;
  points.reserve(tail.points.size() + 1);
  points.push_back(origin);
  points.insert(points.end(), tail.points.begin(), tail.points.end());
  return validate_chain(T, std::move(points), eps, k);
}

Chain isometry_return_chain(const Operator& T, const SeqVector& x, const Rational& eps,
                            NormKind k, std::optional<std::int64_t> steps) {
  if (eps.sign() <= 0) throw DomainError("isometry return chain needs a positive tolerance");
  if (T.norm_bound(k) != Rational(1)) {
    throw CapabilityError("isometry return chain needs certified operator norm 1, got bound " +
                          T.norm_bound(k).str());
  }
  const auto tinv = inverse(T);
  if (!tinv) throw CapabilityError("isometry return chain needs an invertible operator");
  if (tinv->norm_bound(k) != Rational(1)) {
    throw CapabilityError("isometry return chain needs certified inverse norm 1, got bound " +
                          tinv->norm_bound(k).str());
  }
  const std::int64_t nmin = min_steps_strict(T, x, eps / Rational(2), k);
  const std::int64_t n = steps.value_or(nmin);
  if (n < nmin) {
    throw DomainError("requested " + std::to_string(n) + " steps, but ||x||/n < eps/2 needs " +
                      std::to_string(nmin));
  }
  std::vector<SeqVector> fwd, bwd;
  fwd.reserve(static_cast<std::size_t>(n) + 1);
  bwd.reserve(static_cast<std::size_t>(n) + 1);
  fwd.push_back(x);
  bwd.push_back(x);
  for (std::int64_t j = 1; j <= n; ++j) {
    fwd.push_back(T.apply(fwd.back()));
    bwd.push_back(tinv->apply(bwd.back()));
  }
  std::vector<SeqVector> points;
  points.reserve(static_cast<std::size_t>(n) + 1);
  for (std::int64_t j = 0; j <= n; ++j) {
    // x_j = T^j x + (j/n)(T^{j-n} x - T^j x); x_n lands on x exactly.
    SeqVector p = fwd[static_cast<std::size_t>(j)];
    const Rational c(static_cast<long>(j), static_cast<long>(n));
    p.add_scaled(c, bwd[static_cast<std::size_t>(n - j)] - fwd[static_cast<std::size_t>(j)]);
    points.push_back(std::move(p));
  }
  return validate_chain(T, std::move(points), eps, k);
}

Chain sum_chain(const Chain& cx, const Chain& cy, const Operator& T, NormKind k) {
  if (!cx.points.back().is_zero() || !cy.points.back().is_zero()) {
    throw DomainError("sum_chain needs both chains to terminate at 0");
  }
  const std::size_t n = std::max(cx.points.size(), cy.points.size());
  const SeqVector zero = SeqVector::zero(cx.points.front().domain());
  std::vector<SeqVector> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SeqVector& a = i < cx.points.size() ? cx.points[i] : zero;
    const SeqVector& b = i < cy.points.size() ? cy.points[i] : zero;
    points.push_back(a + b);
  }
  return validate_chain(T, std::move(points), cx.epsilon + cy.epsilon, k);
}

Chain image_chain(const Chain& c, const Operator& T, NormKind k) {
  if (!(c.points.front() == c.points.back())) {
    throw DomainError("image_chain needs a return chain");
  }
  Rational b = T.norm_bound(k);
  if (b < Rational(1)) b = Rational(1);
  const Rational eps_out = Rational(2) * b * c.epsilon;
  const SeqVector tx = T.apply(c.points.front());
  std::vector<SeqVector> points;
  points.reserve(c.points.size());
  points.push_back(tx);
  for (std::size_t j = 2; j < c.points.size(); ++j) points.push_back(c.points[j]);
  points.push_back(tx);
  return validate_chain(T, std::move(points), eps_out, k);
}

Chain inverse_chain(const Chain& c, const Operator& T, NormKind k) {
  const auto tinv = inverse(T);
  if (!tinv) throw CapabilityError("inverse_chain needs an invertible operator");
  const Rational eps_out = tinv->norm_bound(k) * c.epsilon;
  std::vector<SeqVector> points(c.points.rbegin(), c.points.rend());
  return validate_chain(*tinv, std::move(points), eps_out, k);
}

namespace {

// Embeds factor-local vectors at their block starts; rejects support escaping
// a block's width.
SeqVector embed_blocks(const std::vector<OperatorBlock>& bs,
                       const std::vector<SeqVector>& locals) {
  SeqVector out(IndexDomain::Naturals);
  for (std::size_t j = 0; j < bs.size(); ++j) {
    if (!locals[j].is_zero() && bs[j].width && locals[j].max_index() >= *bs[j].width) {
      throw DomainError("factor " + std::to_string(j) + " vector escapes its width " +
                        std::to_string(*bs[j].width));
    }
    for (const auto& [i, q] : locals[j].entries()) out.set_entry(i + bs[j].start, q);
  }
  return out;
}

}  // namespace

Chain product_chain(const std::vector<Chain>& stage_to_zero,
                    const std::vector<Chain>& from_zero, const Operator& T, NormKind k) {
  if (T.kind() != OperatorKind::Product) {
    throw DomainError("product_chain needs a Product operator");
  }
  const auto bs = T.blocks();
  const std::size_t nf = bs.size();
  if (stage_to_zero.size() != nf || from_zero.size() != nf) {
    throw DomainError("product_chain needs one stage chain and one from-zero chain per factor, got " +
                      std::to_string(stage_to_zero.size()) + "+" +
                      std::to_string(from_zero.size()) + " for " + std::to_string(nf) +
                      " factors");
  }
  Rational eps_out(0);
  for (std::size_t j = 0; j < nf; ++j) {
    if (!from_zero[j].points.front().is_zero()) {
      throw DomainError("from-zero chain for factor " + std::to_string(j) +
                        " must start at 0");
    }
    if (!stage_to_zero[j].points.back().is_zero()) {
      throw DomainError("stage chain for factor " + std::to_string(j) + " must end at 0");
    }
    eps_out = std::max({eps_out, stage_to_zero[j].epsilon, from_zero[j].epsilon});
  }

  // Phase A: factor j walks its stage chain while later factors evolve under
  // their operators and earlier factors sit at 0. The stage chain must start
  // at the evolved point reached when its turn comes.
  std::vector<SeqVector> cur;
  cur.reserve(nf);
  for (std::size_t j = 0; j < nf; ++j) cur.push_back(from_zero[j].points.back());
  std::vector<SeqVector> points;
  points.push_back(embed_blocks(bs, cur));
  for (std::size_t j = 0; j < nf; ++j) {
    if (!(stage_to_zero[j].points.front() == cur[j])) {
      throw DomainError("stage chain for factor " + std::to_string(j) +
                        " must start at the evolved point " + cur[j].str() + ", got " +
                        stage_to_zero[j].points.front().str());
    }
    for (std::size_t s = 1; s < stage_to_zero[j].points.size(); ++s) {
      cur[j] = stage_to_zero[j].points[s];
      for (std::size_t i = j + 1; i < nf; ++i) cur[i] = bs[i].op.apply(cur[i]);
      points.push_back(embed_blocks(bs, cur));
    }
  }

  // Phase B: from-zero chains, front-padded with zeros to a common length so
  // every factor arrives at its target simultaneously.
  std::size_t m = 0;
  for (const auto& c : from_zero) m = std::max(m, c.points.size());
  for (std::size_t t = 1; t < m; ++t) {
    for (std::size_t j = 0; j < nf; ++j) {
      const std::size_t lead = m - from_zero[j].points.size();
      cur[j] = t < lead ? SeqVector::zero(IndexDomain::Naturals)
                        : from_zero[j].points[t - lead];
    }
    points.push_back(embed_blocks(bs, cur));
  }
  return validate_chain(T, std::move(points), eps_out, k);
}

Chain projection_chain(const Chain& c, const Rational& alpha, const Operator& T,
                       SumBlock which, NormKind k) {
  if (T.kind() != OperatorKind::DirectSum) {
    throw DomainError("projection_chain needs a DirectSum operator");
  }
  if (alpha.sign() <= 0) throw DomainError("projection constant must be positive");
  const std::int64_t offset = T.blocks()[1].start;
  const auto project = [offset, which](const SeqVector& v) {
    SeqVector p(IndexDomain::Naturals);
    for (const auto& [i, q] : v.entries()) {
      if (which == SumBlock::Left ? i < offset : i >= offset) p.set_entry(i, q);
    }
    return p;
  };
  if (!(project(c.points.front()) == c.points.front()) ||
      !(project(c.points.back()) == c.points.back())) {
    throw DomainError("projection_chain needs both endpoints inside the target block");
  }
  std::vector<SeqVector> points;
  points.reserve(c.points.size());
  for (const auto& p : c.points) points.push_back(project(p));
  return validate_chain(T, std::move(points), alpha * c.epsilon, k);
}

NoReturnCertificate contraction_no_return_certificate(const Operator& T, const SeqVector& x,
                                                      const Rational& delta, NormKind k) {
  if (x.is_zero()) {
    throw DomainError("no-return certificate excludes x = 0: the origin is chain recurrent");
  }
  if (delta.sign() <= 0) throw DomainError("no-return certificate needs delta > 0");
  const Rational b = T.norm_bound(k);
  if (!(b < Rational(1))) {
    throw CapabilityError("no-return certificate needs a certified contraction, got bound " +
                          b.str());
  }
  const auto nx = space_norm_exact(T, x, k);
  if (!nx) {
    throw DomainError("no-return certificate needs an exactly representable ||x|| "
                      "(norm 2 of this x is irrational)");
  }
  const auto ntx = space_norm_exact(T, T.apply(x), k);
  if (!ntx) {
    throw DomainError("no-return certificate needs an exactly representable ||Tx||");
  }
  const Rational eps = (*nx - *ntx - delta) * (Rational(1) - b);
  if (eps.sign() <= 0) {
    throw DomainError("infeasible certificate: eps = (||x|| - ||Tx|| - delta)(1 - bound) = " +
                      eps.str() + " is not positive");
  }
  return NoReturnCertificate{eps, delta, *nx, *ntx, b, k};
}

Rational no_return_terminal_bound(const NoReturnCertificate& cert, const Operator& T,
                                  const SeqVector& x, std::int64_t n) {
  if (n < 1) throw DomainError("terminal bound is defined for chain lengths >= 1");
  const Rational tail = cert.eps / (Rational(1) - cert.contraction);
  return space_norm_upper_bound(T, apply_power(T, x, n), cert.kind) + tail;
}

NoReturnSearchResult contraction_no_return_search(const Operator& T, const SeqVector& x,
                                                  const NoReturnCertificate& cert,
                                                  std::uint64_t trials,
                                                  std::int64_t max_length,
                                                  std::int64_t grid_denominator,
                                                  std::int64_t window, std::uint64_t seed) {
  if (max_length < 1) throw DomainError("search needs max_length >= 1");
  Rng rng(seed);
  NoReturnSearchResult res;
  res.worst_terminal_norm = Rational(0);
  // Largest numerator total t with t/denominator < eps, so every sampled
  // defect keeps the chain a valid eps-chain.
  std::int64_t tmax = ceil_to_int64(cert.eps * Rational(static_cast<long>(grid_denominator))) - 1;
  if (tmax < 0) tmax = 0;
  std::map<std::int64_t, Rational> bound_by_length;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const std::int64_t len = rng.range(1, max_length);
    SeqVector cur = x;
    for (std::int64_t s = 0; s < len; ++s) {
      const SeqVector d =
          random_grid_vector(rng, 0, window, tmax, grid_denominator, T.domain());
      if (!space_norm_less(T, d, cert.eps, cert.kind)) {
        throw CertificateError("sampled defect escaped the eps ball");
      }
      cur = T.apply(cur);
      cur.add_scaled(Rational(1), d);
    }
    const auto tn = space_norm_exact(T, cur, cert.kind);
    if (!tn) throw DomainError("search terminal norm not exactly representable");
    if (!(*tn < cert.norm_x)) res.all_below_norm_x = false;
    auto [it, fresh] = bound_by_length.try_emplace(len, Rational(0));
    if (fresh) it->second = no_return_terminal_bound(cert, T, x, len);
    if (*tn > it->second) res.all_within_analytic_bound = false;
    if (*tn > res.worst_terminal_norm) {
      res.worst_terminal_norm = *tn;
      res.worst_trial = trial;
      res.worst_length = len;
    }
    ++res.trials;
  }
  return res;
}

}  // namespace lindyn
