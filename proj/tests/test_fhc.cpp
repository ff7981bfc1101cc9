#include "doctest.h"

#include <set>
#include <string>

#include "lindyn/fhc.hpp"

using namespace lindyn;

namespace {

SeqVector nat(std::initializer_list<std::pair<std::int64_t, Rational>> entries) {
  return SeqVector::from_entries(entries, IndexDomain::Naturals);
}

const Operator kDbl = Operator::doubling_shift_fixed_line();
const ConnectFactory kFactory = doubling_shift_connect_factory(NormKind::One);

}  // namespace

TEST_CASE("through-chain centers the target and pads both halves") {
  const SeqVector e0 = SeqVector::basis(0);
  const ChainThroughRecord rec =
      chain_through(e0, Rational(1, 4), kFactory, kDbl, NormKind::One);

  // R_p = max(ceil'(4/delta) = 17, l_up - 1 = 5, l_down = 10) = 17.
  CHECK(rec.rp == 17);
  REQUIRE(rec.points.size() == 34);
  CHECK(rec.points[17] == e0);
  for (std::size_t i = 0; i < 12; ++i) CHECK(rec.points[i].is_zero());
  CHECK(rec.points[12].is_zero());
  CHECK(rec.points[13] == nat({{4, Rational(1, 16)}}));
  CHECK(rec.points[16] == nat({{1, Rational(1, 2)}}));
  CHECK(rec.points[18] == nat({{0, Rational(8, 9)}}));
  CHECK(rec.points[26].is_zero());
  for (std::size_t i = 27; i < 34; ++i) CHECK(rec.points[i].is_zero());
  CHECK(rec.delta_p == Rational(1, 4));

  // An explicit lower bound on R_p widens the block.
  const ChainThroughRecord wide =
      chain_through(e0, Rational(1, 4), kFactory, kDbl, NormKind::One, 20);
  CHECK(wide.rp == 20);
  CHECK(wide.points.size() == 40);
  CHECK(wide.points[20] == e0);

  CHECK_THROWS_AS(chain_through(e0, Rational(0), kFactory, kDbl, NormKind::One), DomainError);
  CHECK_THROWS_AS(chain_through(e0, Rational(1, 4), kFactory, kDbl, NormKind::One, 0),
                  DomainError);
  // A factory that misses the target is rejected.
  const ConnectFactory off = [](const SeqVector& t, const Rational& d) {
    return doubling_shift_connect_chain(Rational(2) * t, d, NormKind::One);
  };
  CHECK_THROWS_AS(chain_through(e0, Rational(1, 4), off, kDbl, NormKind::One), DomainError);
}

TEST_CASE("gamma orbit interpolates the through-chain against the prior orbit") {
  const SeqVector e0 = SeqVector::basis(0);
  const ChainThroughRecord rec =
      chain_through(e0, Rational(1, 4), kFactory, kDbl, NormKind::One);
  const DensitySchedule s = build_schedule({34});
  REQUIRE(s.offsets == std::vector<std::int64_t>{34});
  REQUIRE(s.period == 102);
  const SeqVector prior = nat({{0, Rational(1, 8)}});

  GammaCaseStats st;
  const PseudoOrbit po = gamma_pseudo_orbit(0, s, prior, rec, kDbl, 150, NormKind::One, &st);
  CHECK(po.delta == Rational(1, 4));
  REQUIRE(po.points.size() == 151);

  // Off blocks the orbit is exactly zero; at the block start the chain is
  // still at 0 with coefficient 0.
  CHECK(po.points[0].is_zero());
  CHECK(po.points[33].is_zero());
  CHECK(po.points[34].is_zero());
  CHECK(po.points[100].is_zero());
  // Midpoint n = 34 + 17: x_p minus the full prior orbit value.
  CHECK(po.points[51] == nat({{0, Rational(7, 8)}}));

  // Family tally over [0, 150): 102 off-block steps, 17 + 14 ascending (the
  // second block is cut by the horizon), 1 crossing, 15 descending, 1 exit.
  CHECK(st.counts == std::array<std::int64_t, 5>{102, 31, 1, 15, 1});
  CHECK(st.worst[0] == Rational(0));
  CHECK(st.worst[1] == Rational(19, 272));
  CHECK(st.worst[2] == Rational(127, 1224));
  CHECK(st.worst[3] == Rational(127, 1224));
  CHECK(st.worst[4] == Rational(1, 136));

  // The surrogate bound on the prior orbit is enforced.
  CHECK_THROWS_AS(gamma_pseudo_orbit(0, s, nat({{0, Rational(2)}}), rec, kDbl, 10,
                                     NormKind::One),
                  CertificateError);
  // The through-chain must fill the block exactly.
  const DensitySchedule wrong = build_schedule({36});
  CHECK_THROWS_AS(gamma_pseudo_orbit(0, wrong, prior, rec, kDbl, 10, NormKind::One),
                  DomainError);
  CHECK_THROWS_AS(gamma_pseudo_orbit(1, s, prior, rec, kDbl, 10, NormKind::One), DomainError);
}

TEST_CASE("two-class construction certifies every property") {
  const FhcCertificate cert =
      construct_fhc_vector(kDbl, dense_seq_element, 1, std::nullopt, kFactory, NormKind::One);

  REQUIRE(cert.classes.size() == 2);
  CHECK(cert.schedule.block_sizes == std::vector<std::int64_t>{18, 34});
  CHECK(cert.schedule.offsets == std::vector<std::int64_t>{18, 70});
  CHECK(cert.schedule.period == 122);
  CHECK(cert.horizon == 610);  // default 5 periods

  // Class 0 targets the zero vector: its increment is exactly zero.
  CHECK(cert.classes[0].target.is_zero());
  CHECK(cert.classes[0].rp == 9);
  CHECK(cert.classes[0].eps_p == Rational(1));
  CHECK(cert.classes[0].delta_p == Rational(1, 2));
  CHECK(cert.classes[0].zp.is_zero());
  CHECK(cert.classes[0].orbit_sum_checks == 5);

  // Class 1 targets -e_0 and carries the actual mass.
  CHECK(cert.classes[1].target == nat({{0, Rational(-1)}}));
  CHECK(cert.classes[1].rp == 17);
  CHECK(cert.classes[1].eps_p == Rational(1, 2));
  CHECK(cert.classes[1].delta_p == Rational(1, 4));
  CHECK_FALSE(cert.classes[1].zp.is_zero());
  CHECK(cert.z == cert.classes[1].zp);
  CHECK(norm_less(cert.classes[1].zp, Rational(1, 2), NormKind::One));
  CHECK(cert.classes[1].shadow_max_error <= cert.classes[1].shadow_analytic);
  CHECK(cert.classes[1].worst_orbit_sum_error < Rational(1, 2));
  CHECK(cert.classes[1].worst_off_block_norm < Rational(1, 2));
  CHECK(cert.z_norm < Rational(2));

  // Visit bookkeeping: midpoints of every block are expected and realized.
  REQUIRE(cert.visits.size() == 2);
  CHECK(cert.visits[0].radius == Rational(1, 2));
  CHECK(cert.visits[0].expected ==
        std::vector<std::int64_t>{27, 149, 271, 393, 515});
  CHECK(cert.visits[1].radius == Rational(1, 4));
  CHECK(cert.visits[1].expected ==
        std::vector<std::int64_t>{87, 209, 331, 453, 575});
  for (const auto& v : cert.visits) {
    CHECK(v.contains_expected);
    CHECK(v.density >= Rational(5, 610));
    for (const std::int64_t n : v.expected) {
      CHECK(norm_less(apply_power(kDbl, cert.z, n) - cert.classes[v.p].target, v.radius,
                      NormKind::One));
    }
  }

  CHECK_THROWS_AS(
      construct_fhc_vector(kDbl, dense_seq_element, -1, std::nullopt, kFactory, NormKind::One),
      DomainError);
  CHECK_THROWS_AS(
      construct_fhc_vector(kDbl, dense_seq_element, 1, 50, kFactory, NormKind::One),
      DomainError);
}

TEST_CASE("visit times flag exactly the in-ball orbit indices") {
  const Operator half = Operator::diagonal({}, Rational(1, 2));
  const Ball b{SeqVector::zero(), Rational(1, 10)};
  const std::vector<std::int64_t> vs =
      visit_times(half, SeqVector::basis(0), b, 20, NormKind::One);
  REQUIRE(vs.size() == 17);
  CHECK(vs.front() == 4);  // 1/16 < 1/10 <= 1/8
  CHECK(vs.back() == 20);
  CHECK(visit_density(half, SeqVector::basis(0), b, 20, NormKind::One) == Rational(17, 20));
  CHECK_THROWS_AS(visit_times(half, SeqVector::basis(0), b, 0, NormKind::One), DomainError);
}

TEST_CASE("dense sequence enumerates dyadic vectors without repetition") {
  CHECK(dense_seq_element(0).is_zero());
  CHECK(dense_seq_element(1) == nat({{0, Rational(-1)}}));
  CHECK(dense_seq_element(2) == nat({{0, Rational(1)}}));
  CHECK(dense_seq_element(3) == nat({{0, Rational(-1, 2)}}));
  CHECK(dense_seq_element(4) == nat({{0, Rational(1, 2)}}));
  CHECK(dense_seq_element(5) == nat({{0, Rational(-2)}}));
  CHECK(dense_seq_element(6) == nat({{0, Rational(2)}}));
  CHECK(dense_seq_element(7) == nat({{0, Rational(-1, 4)}}));
  CHECK(dense_seq_element(8) == nat({{0, Rational(1, 4)}}));
  CHECK(dense_seq_element(9) == nat({{1, Rational(-2)}}));
  CHECK(dense_seq_element(10) == nat({{1, Rational(-1)}}));
  CHECK(dense_seq_element(11) == nat({{1, Rational(1)}}));
  CHECK_THROWS_AS(dense_seq_element(-1), DomainError);

  // The first two levels are injective and cover every pair vector on {0, 1}
  // with entries in {-1, 1, -1/2, 1/2}.
  std::set<std::string> seen;
  for (std::int64_t p = 0; p <= 80; ++p) {
    CHECK(seen.insert(dense_seq_element(p).str()).second);
  }
  for (const Rational& a : {Rational(-1), Rational(1), Rational(-1, 2), Rational(1, 2)}) {
    for (const Rational& b : {Rational(-1), Rational(1), Rational(-1, 2), Rational(1, 2)}) {
      CHECK(seen.count(nat({{0, a}, {1, b}}).str()) == 1);
    }
  }
}
