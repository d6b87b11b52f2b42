#include <gtest/gtest.h>

#include "g2cy/moduli.hpp"
#include "g2cy/su3.hpp"
#include "g2cy/twisting.hpp"
#include "model_helpers.hpp"

using namespace g2cy;
using namespace g2cy::testing;

namespace {

using Q = Rational;
const auto kTorus = ModelManifold<Q>::torus(7, 0);

ModelForm<Q> constant(const AltForm<Q>& a) {
  ModelForm<Q> m(kTorus, a.degree());
  m.add_constant(a);
  return m;
}

// keep only the Fourier terms with no theta dependence
ModelForm<Q> invariant_part(const ModelForm<Q>& a) {
  ModelForm<Q> out(a.manifold(), a.degree());
  for (const auto& [key, c] : a.terms())
    if (key.k[0] == 0) out.add(key.k, key.profile, c);
  return out;
}

}  // namespace

TEST(Kunneth, RoundTripOnRandomClasses) {
  Rng rng(601);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_form<Q>(rng, 7, 3, 4);
    auto [x, y] = kunneth3(a);
    EXPECT_EQ(x.dim(), 6);
    EXPECT_EQ(y.degree(), 2);
    EXPECT_EQ(reassemble3(x, y), a);
    auto [x2, y2] = kunneth3(a, 6);
    EXPECT_EQ(reassemble3(x2, y2, 6), a);
  }
}

TEST(Kunneth, ProductStructureSplitsIntoReOmegaAndOmega) {
  auto su3 = standard_su3<Q>();
  Q L = ratio<Q>(3, 2);
  auto phi = reassemble3(su3.re, su3.omega * L);
  auto [a, b] = kunneth3(phi);
  EXPECT_EQ(a, su3.re);
  EXPECT_EQ(b, su3.omega * L);
}

TEST(Moduli, DimensionCount) {
  EXPECT_EQ(msu3_dimension(0, 1, 2), 2);
  EXPECT_EQ(msu3_dimension(6, 15, 20), 28);
  EXPECT_EQ(msu3_dimension(0, 101, 204), 304);
  // b3(M x S^1) - 1 - b1(M)
  for (long b1 : {0L, 3L})
    for (long b2 : {1L, 9L})
      for (long b3 : {2L, 20L}) EXPECT_EQ(msu3_dimension(b1, b2, b3), product_b3(b2, b3) - 1 - b1);
  EXPECT_THROW(msu3_dimension(-1, 1, 1), std::invalid_argument);
}

TEST(Twisting, ConstantAndExactParts) {
  auto z = constant(AltForm<Q>::monomial(7, {0}, Q(3)));
  auto t = twisting_class(z);
  EXPECT_EQ(t.L, Q(3));
  EXPECT_TRUE(t.v.is_zero());
  ModelForm<Q> f(kTorus, 0);
  f.add_sin({0, 1, 0, 2, 0, 0, 0}, unit_profile<Q>(), AltForm<Q>::scalar(7, ratio<Q>(1, 5)));
  auto t2 = twisting_class(constant(AltForm<Q>::monomial(7, {0})) + exterior_d(f) +
                           constant(AltForm<Q>::monomial(7, {2}, ratio<Q>(1, 4))));
  EXPECT_EQ(t2.L, Q(1));
  EXPECT_EQ(t2.v.max_abs(), 0.25);
  EXPECT_EQ(t2.v.coeff(Mask(1) << 2), 0.25);
}

TEST(Twisting, Rejections) {
  EXPECT_THROW(twisting_class(constant(AltForm<Q>::monomial(7, {0}, Q(-1)))), ModuliError);
  EXPECT_THROW(twisting_class(constant(AltForm<Q>::monomial(7, {1}))), ModuliError);
  ModelForm<Q> bad(kTorus, 1);
  bad.add_cos({0, 1, 0, 0, 0, 0, 0}, unit_profile<Q>(), AltForm<Q>::monomial(7, {2}));
  EXPECT_THROW(twisting_class(constant(AltForm<Q>::monomial(7, {0})) + bad), ModuliError);
  try {
    twisting_class(constant(AltForm<Q>::monomial(7, {0}, Q(0))));
    FAIL();
  } catch (const ModuliError& e) {
    EXPECT_NE(std::string(e.what()).find("L must be positive"), std::string::npos);
  }
}

TEST(Coordinates, InvariantUnderExactChangesAndShears) {
  Rng rng(602);
  auto su3 = standard_su3<Q>();
  auto re = constant(lift_from_v(su3.re));
  auto om = constant(lift_from_v(su3.omega));
  auto base = su3_coordinates(re, om);
  for (int trial = 0; trial < 5; ++trial) {
    auto s2 = random_model_form<Q>(rng, kTorus, 2, 3, 2);
    auto s1 = random_model_form<Q>(rng, kTorus, 1, 3, 2);
    // keep the test on circle-invariant data
    s2 = invariant_part(s2);
    s1 = invariant_part(s1);
    auto moved = su3_coordinates(re + exterior_d(s2), om + exterior_d(s1));
    EXPECT_EQ((moved.first - base.first).max_abs(), 0.0);
    EXPECT_EQ((moved.second - base.second).max_abs(), 0.0);
    // the shear by f changes the representative, not the class
    auto phi = re + wedge(constant(AltForm<Q>::monomial(7, {0})), om);
    auto f = invariant_part(random_model_form<Q>(rng, kTorus, 0, 2, 2));
    EXPECT_EQ((class_vector(twist_gauge(phi, f, Q(1))) - class_vector(phi)).max_abs(), 0.0);
  }
  EXPECT_THROW(su3_coordinates(re + constant(AltForm<Q>::monomial(7, {1, 2, 3})) + [] {
                 ModelForm<Q> n(kTorus, 3);
                 n.add_cos({0, 1, 0, 0, 0, 0, 0}, unit_profile<Q>(), AltForm<Q>::monomial(7, {2, 3, 4}));
                 return n;
               }(),
                             om),
               ModuliError);
}

TEST(Coordinates, WedgeOfClassesIsClassOfWedge) {
  Rng rng(603);
  for (int trial = 0; trial < 5; ++trial) {
    auto a = random_form<Q>(rng, 7, 2, 4), b = random_form<Q>(rng, 7, 3, 4);
    auto s1 = random_model_form<Q>(rng, kTorus, 1, 2, 2), s2 = random_model_form<Q>(rng, kTorus, 2, 2, 2);
    auto A = constant(a) + exterior_d(s1), B = constant(b) + exterior_d(s2);
    CohomologyVector<double> ca{class_vector(A), {}}, cb{class_vector(B), {}};
    EXPECT_LE((wedge(ca, cb).rep - class_vector(wedge(A, B))).max_abs(), 1e-14 * (1.0 + ca.rep.max_abs() * cb.rep.max_abs()));
  }
}

TEST(Coordinates, BasisLabels) {
  CohomologyVector<double> v{AltForm<double>::monomial(7, {1, 3}, 2.0), {"theta", "x1", "x2", "x3", "x4", "x5", "s"}};
  auto labels = v.basis_labels();
  ASSERT_EQ(labels.size(), 21u);
  EXPECT_EQ(labels.front(), "dtheta^dx1");
  EXPECT_EQ(labels.back(), "dx5^ds");
  auto c = v.coordinates();
  for (std::size_t i = 0; i < labels.size(); ++i) EXPECT_EQ(c[i], labels[i] == "dx1^dx3" ? 2.0 : 0.0);
}

TEST(GluedClasses, RelationsAndScaling) {
  auto su3 = standard_su3<double>();
  GluedClassInputs in;
  in.glued_re = lift_from_v(su3.re);
  in.glued_omega = lift_from_v(su3.omega);
  in.glued_v = AltForm<double>::monomial(7, {2}, 0.1);
  in.L = 1.0;
  in.L_measured = 1.25;
  in.re = in.glued_re;
  in.omega = in.glued_omega * (1.0 / 1.25);
  in.v = in.glued_v * 1.25;
  auto r = glued_class_check(in, 1e-12);
  EXPECT_DOUBLE_EQ(r.c, 1.25);
  EXPECT_TRUE(r.passed());
  ASSERT_EQ(r.relations.size(), 4u);
  in.omega = in.glued_omega;
  r = glued_class_check(in, 1e-12);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.relations[1].passed);
  in.L_measured = 0.0;
  EXPECT_THROW(glued_class_check(in, 1e-12), ModuliError);
}
