#include <gtest/gtest.h>

#include "g2cy/correspondence.hpp"
#include "g2cy/random.hpp"

using namespace g2cy;

namespace {

using Q = Rational;

AltForm<Q> e(std::vector<int> idx) { return AltForm<Q>::monomial(7, idx); }

template <class S>
CorrespondenceTriple<S> random_triple(Rng& rng) {
  auto A = random_gl_plus<S>(rng, 6);
  auto s = pullback_su3(A, standard_su3<S>());
  AltForm<S> z = random_form<S>(rng, 7, 1, 1.0, 0.7);
  S c;
  do c = random_scalar<S>(rng, 2.0);
  while (std::abs(to_double(c)) < 0.2);
  AltForm<S> zt(7, 1);
  for (const auto& [m, v] : z.terms())
    if (m != 1) zt.add(m, v);
  zt.add(Mask(1), c);
  return {Twisting<S>(zt), s};
}

}  // namespace

TEST(G2FromSU3, StandardTripleGivesStandardPhi) {
  CorrespondenceTriple<Q> t{Twisting<Q>(e({0})), standard_su3<Q>()};
  auto g = g2_from_su3(t);
  EXPECT_EQ(g.phi(), standard_phi_form<Q>());
  EXPECT_EQ(g.metric().matrix(), Matrix<Q>::identity(7));
  AltForm<Q> w = lift_from_v(t.s.omega);
  EXPECT_EQ(g.dual(), wedge(w, w) * Q(1, 2) - wedge(e({0}), lift_from_v(t.s.im)));
}

TEST(G2FromSU3, RejectsInvalidSU3) {
  auto s = standard_su3<Q>();
  s.omega = s.omega * Q(2);
  EXPECT_THROW(g2_from_su3(CorrespondenceTriple<Q>{Twisting<Q>(e({0})), s}), NotSU3Error);
}

TEST(Twisting, RejectsTangentCovectors) {
  EXPECT_THROW(Twisting<Q>(e({3})), NotComplementaryError);
  AltForm<double> z(7, 1);
  z.add(Mask(1), 1e-9);
  z.add(Mask(2), 1.0);
  EXPECT_THROW(Twisting<double>{z}, NotComplementaryError);
  EXPECT_EQ(Twisting<Q>(e({0}) * Q(-2) + e({4})).orientation(), -1);
}

TEST(SU3FromG2, StandardBothOrientations) {
  auto phi = standard_phi<Q>();
  auto plus = su3_from_g2(phi, 1);
  EXPECT_EQ(plus.z.form(), e({0}));
  EXPECT_EQ(plus.s, standard_su3<Q>());
  auto minus = su3_from_g2(phi, -1);
  EXPECT_EQ(minus.z.form(), -e({0}));
  EXPECT_EQ(minus.s, standard_su3<Q>().conjugate());
  EXPECT_TRUE(validate_su3(minus.s).passed());
}

TEST(SU3FromG2, ExactRoundTripAndProductMetric) {
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    auto t = random_triple<Q>(rng);
    auto g = g2_from_su3(t);
    auto back = su3_from_g2(g, t.z.orientation());
    EXPECT_EQ(back, t);
    EXPECT_EQ(g.metric().matrix(), product_metric(t).matrix());
    EXPECT_EQ(assemble_phi(back.z, back.s), g.phi());
  }
}

TEST(SU3FromG2, FloatRoundTrip) {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    auto t = random_triple<double>(rng);
    auto back = su3_from_g2(g2_from_su3(t), t.z.orientation());
    EXPECT_LE((back.z.form() - t.z.form()).max_abs(), 1e-10);
    EXPECT_LE((back.s.re - t.s.re).max_abs(), 1e-10);
    EXPECT_LE((back.s.im - t.s.im).max_abs(), 1e-10);
    EXPECT_LE((back.s.omega - t.s.omega).max_abs(), 1e-10);
  }
}

TEST(SU3FromG2, ConormalOfRandomPositiveForm) {
  // Generic GL+ pullbacks of phi_std: exact square roots are not available, so
  // run in float and check the defining properties of the output.
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    auto phi = pullback_linear(random_gl_plus<double>(rng, 7, 0.4), standard_phi_form<double>());
    G2Structure<double> g(phi);
    auto t = su3_from_g2(g, 1);
    EXPECT_GT(t.z.theta_component(), 0.0);
    EXPECT_TRUE(validate_su3(t.s).passed());
    EXPECT_LE((assemble_phi(t.z, t.s) - phi).max_abs(), 1e-10);
    EXPECT_LE((product_metric(t).matrix() - g.metric().matrix()).max_abs(), 1e-10);
  }
}

TEST(SignTwin, InvolutionSamePhiValid) {
  Rng rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = random_triple<Q>(rng);
    auto tw = sign_twin(t);
    EXPECT_EQ(sign_twin(tw), t);
    EXPECT_EQ(assemble_phi(tw.z, tw.s), assemble_phi(t.z, t.s));
    EXPECT_TRUE(validate_su3(tw.s).passed());
    EXPECT_EQ(su3_from_g2(g2_from_su3(t), -t.z.orientation()), tw);
  }
  CorrespondenceTriple<Q> std_t{Twisting<Q>(e({0})), standard_su3<Q>()};
  auto tw = sign_twin(std_t);
  EXPECT_EQ(tw.z.form(), -e({0}));
  EXPECT_EQ(tw.s.im, -standard_su3<Q>().im);
  EXPECT_EQ(tw.s.omega, -standard_su3<Q>().omega);
}

TEST(EnumerateTriples, ExactlyTheTwinPair) {
  Rng rng(45);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = random_triple<Q>(rng);
    auto g = g2_from_su3(t);
    auto all = enumerate_triples(g);
    ASSERT_EQ(all.size(), 2u);
    EXPECT_TRUE((all[0] == t && all[1] == sign_twin(t)) || (all[1] == t && all[0] == sign_twin(t)));
  }
}

TEST(DecomposeWith, NonConormalsRejected) {
  auto phi = standard_phi<Q>();
  EXPECT_FALSE(decompose_with(phi, e({0}) * Q(2)).has_value());
  EXPECT_FALSE(decompose_with(phi, (e({0}) * Q(3) + e({1}) * Q(4)) * Q(1, 5)).has_value());
  EXPECT_TRUE(decompose_with(phi, e({0})).has_value());
}

TEST(SU3FromG2, LipschitzOnThePositiveCone) {
  Rng rng(46);
  for (int trial = 0; trial < 10; ++trial) {
    auto phi = pullback_linear(random_gl_plus<double>(rng, 7, 0.3), standard_phi_form<double>());
    auto dir = random_form<double>(rng, 7, 3);
    auto base = su3_from_g2(phi);
    std::vector<double> ratio;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
      auto moved = su3_from_g2(AltForm<double>(phi + dir * eps));
      double d = std::max({(moved.z.form() - base.z.form()).max_abs(), (moved.s.re - base.s.re).max_abs(),
                           (moved.s.im - base.s.im).max_abs(), (moved.s.omega - base.s.omega).max_abs()});
      ratio.push_back(d / eps);
    }
    EXPECT_LT(ratio[2], 1e3);
    EXPECT_NEAR(ratio[1], ratio[2], 0.05 * ratio[2] + 1e-6);
  }
}
