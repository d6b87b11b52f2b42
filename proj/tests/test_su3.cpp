#include <gtest/gtest.h>

#include "g2cy/random.hpp"
#include "g2cy/su3.hpp"

using namespace g2cy;

namespace {

using Q = Rational;

AltForm<Q> e6(std::vector<int> idx) { return AltForm<Q>::monomial(6, idx); }

}  // namespace

TEST(StandardSU3, AllConditionsExact) {
  auto v = validate_su3(standard_su3<Q>());
  EXPECT_TRUE(v.passed()) << v.summary();
  for (const auto& c : v.conditions) EXPECT_EQ(c.residual, 0.0);
}

TEST(StandardSU3, OmegaWedgeConjIsMinusEightIVol) {
  auto s = standard_su3<Q>();
  Complex<Q> top = omega_wedge_conj(s.re, s.im);
  EXPECT_EQ(top, Complex<Q>(Q(0), Q(-8)));
  // Oracle: expand Omega ^ conj(Omega) with complex coefficients directly.
  std::vector<std::vector<int>> pairs = {{0, 1}, {2, 3}, {4, 5}};
  AltForm<Complex<Q>> om = AltForm<Complex<Q>>::scalar(6, Complex<Q>(Q(1)));
  AltForm<Complex<Q>> omb = om;
  for (const auto& p : pairs) {
    AltForm<Complex<Q>> f(6, 1), fb(6, 1);
    f.add(mask_of({p[0]}), Complex<Q>(Q(1)));
    f.add(mask_of({p[1]}), Complex<Q>(Q(0), Q(1)));
    fb.add(mask_of({p[0]}), Complex<Q>(Q(1)));
    fb.add(mask_of({p[1]}), Complex<Q>(Q(0), Q(-1)));
    om = wedge(om, f);
    omb = wedge(omb, fb);
  }
  EXPECT_EQ(top_coefficient(wedge(om, omb)), Complex<Q>(Q(0), Q(-8)));
}

TEST(StandardSU3, EuclideanMetricAndBlockRotation) {
  auto [I, g] = acs_and_metric(standard_su3<Q>());
  EXPECT_EQ(I, standard_complex_structure<Q>());
  EXPECT_EQ(g.matrix(), Matrix<Q>::identity(6));
  EXPECT_EQ(I * I, Matrix<Q>::identity(6) * Q(-1));
}

TEST(ValidateSU3, ScaleMismatchBreaksOnlyNormalisation) {
  auto s = standard_su3<Q>();
  s.omega = s.omega * Q(2);
  auto v = validate_su3(s);
  EXPECT_TRUE(v.conditions[0].passed);
  EXPECT_TRUE(v.conditions[1].passed);
  EXPECT_FALSE(v.conditions[2].passed);
  EXPECT_TRUE(v.conditions[3].passed);
  EXPECT_TRUE(v.conditions[4].passed);
}

TEST(ValidateSU3, RescaledStructuresPass) {
  for (int a : {4, 9, 1}) EXPECT_TRUE(validate_su3(rescale(Q(a), standard_su3<Q>())).passed());
  EXPECT_TRUE(validate_su3(rescale(Q(9, 4), standard_su3<Q>())).passed());
  for (double a : {0.5, 2.0, 3.7}) EXPECT_TRUE(validate_su3(rescale(a, standard_su3<double>())).passed());
}

TEST(ValidateSU3, FlippedOmegaFailsPositivity) {
  auto s = standard_su3<Q>();
  s.omega = -s.omega;
  auto v = validate_su3(s);
  EXPECT_FALSE(v.conditions[4].passed);
  EXPECT_TRUE(v.conditions[0].passed);
  EXPECT_TRUE(v.conditions[3].passed);
}

TEST(ValidateSU3, NonDecomposableRejected) {
  auto s = standard_su3<Q>();
  s.im = s.im + e6({0, 1, 2});
  EXPECT_FALSE(validate_su3(s).conditions[0].passed);
  auto z = standard_su3<Q>();
  z.re = AltForm<Q>(6, 3);
  z.im = AltForm<Q>(6, 3);
  EXPECT_FALSE(validate_su3(z).conditions[1].passed);
}

TEST(ValidateSU3, GLPlusPullbackControls) {
  Rng rng(31);
  int v_fail = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto A = random_gl_plus<Q>(rng, 6);
    auto s = pullback_su3(A, standard_su3<Q>());
    auto v = validate_su3(s);
    EXPECT_TRUE(v.conditions[0].passed);
    EXPECT_TRUE(v.conditions[1].passed);
    EXPECT_TRUE(v.conditions[3].passed);
    // Re^Im and omega^3 both scale by det A, so normalisation survives.
    EXPECT_TRUE(v.conditions[2].passed);
    s.omega = s.omega * Q(3, 2);
    EXPECT_FALSE(validate_su3(s).conditions[2].passed);
    v_fail += !v.conditions[4].passed;
  }
  EXPECT_EQ(v_fail, 0);  // GL+ pullbacks of positive pairs stay positive
}

TEST(AcsAndMetric, ConjugateReversesComplexStructure) {
  auto s = standard_su3<Q>();
  auto [I, g] = acs_and_metric(s);
  auto [Ic, gc] = acs_and_metric(s.conjugate());
  EXPECT_EQ(Ic, I * Q(-1));
  EXPECT_EQ(gc.matrix(), g.matrix());
}

TEST(AcsAndMetric, HermitianAndThreeZeroOnPullbacks) {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    auto A = random_gl_plus<Q>(rng, 6);
    auto s = pullback_su3(A, standard_su3<Q>());
    auto [I, g] = acs_and_metric(s);
    EXPECT_EQ(I * I, Matrix<Q>::identity(6) * Q(-1));
    EXPECT_EQ(I.transpose() * g.matrix() * I, g.matrix());
    // Omega(I., ., .) = i Omega  <=>  D_I Re = -3 Im
    EXPECT_EQ(derivation(I, s.re), s.im * Q(-3));
    EXPECT_EQ(g.matrix(), A.transpose() * A);
  }
}

TEST(AcsAndMetric, RescaleKeepsIAndScalesG) {
  auto s = standard_su3<Q>();
  auto [I, g] = acs_and_metric(s);
  auto [I4, g4] = acs_and_metric(rescale(Q(4), s));
  EXPECT_EQ(I4, I);
  EXPECT_EQ(g4.matrix(), g.matrix() * Q(4));
}

TEST(HitchinDual, StandardPair) {
  auto s = standard_su3<Q>();
  auto [hat, data] = hitchin_dual(s.re);
  EXPECT_EQ(hat, s.im);
  EXPECT_LT(data.lambda, Q(0));
}

TEST(HitchinDual, OddnessEquivarianceAndSquare) {
  Rng rng(33);
  auto s = standard_su3<Q>();
  for (int trial = 0; trial < 25; ++trial) {
    auto A = random_gl_plus<Q>(rng, 6);
    auto rho = pullback_linear(A, s.re);
    auto hat = hitchin_dual(rho).first;
    EXPECT_EQ(hat, pullback_linear(A, s.im));
    EXPECT_EQ(hitchin_dual(AltForm<Q>(-rho)).first, -hat);
    EXPECT_EQ(hitchin_dual(hat).first, -rho);
    // rho + i rho_hat decomposable
    EXPECT_TRUE(validate_su3(rho, hat, pullback_linear(A, s.omega)).conditions[0].passed);
  }
}

TEST(HitchinDual, FloatStableConeSquare) {
  Rng rng(34);
  auto s = standard_su3<double>();
  for (int trial = 0; trial < 100; ++trial) {
    auto rho = s.re + random_form<double>(rng, 6, 3) * 0.1;
    auto hat = hitchin_dual(rho).first;
    EXPECT_LE((hitchin_dual(hat).first + rho).max_abs(), 1e-10);
    AltForm<double> w(6, 2);
    auto v = validate_su3(rho, hat, w);
    EXPECT_TRUE(v.conditions[0].passed) << v.conditions[0].residual;
  }
}

TEST(HitchinDual, UnstableFormsRejected) {
  EXPECT_THROW(hitchin_dual(e6({0, 1, 2})), NotStableError);
  EXPECT_THROW(hitchin_dual(AltForm<Q>(6, 3)), NotStableError);
  // Real part of a form with lambda > 0: e123 + e456
  EXPECT_THROW(hitchin_dual(e6({0, 1, 2}) + e6({3, 4, 5})), NotStableError);
}

TEST(RandomFrames, ConditionBoundIsRespected) {
  Rng rng(77);
  EXPECT_DOUBLE_EQ(condition_number(Matrix<double>::identity(4)), 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto A = random_gl_plus_bounded<Rational>(rng, 6, 5.0);
    EXPECT_LE(condition_number(A), 5.0);
    EXPECT_GT(sign_of(determinant(A)), 0);
  }
}
