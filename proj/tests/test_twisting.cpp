#include <gtest/gtest.h>

#include "g2cy/twisting.hpp"
#include "model_helpers.hpp"

using namespace g2cy;
using namespace g2cy::testing;

namespace {

ModelForm<double> invariant(const ModelForm<double>& a) {
  ModelForm<double> out(a.manifold(), a.degree());
  for (const auto& [key, c] : a.terms())
    if (key.k[0] == 0) out.add(key.k, key.profile, c);
  return out;
}

Matrix<double> shear(const AltForm<double>& df, double L) {
  auto J = Matrix<double>::identity(7);
  for (int i = 0; i < 7; ++i) J(0, i) += df.coeff(Mask(1) << i) / L;
  return J;
}

}  // namespace

TEST(Twisting, AgreesWithPointwiseShearPullback) {
  Rng rng(401);
  auto m = ModelManifold<double>::torus(7, 0);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  for (int trial = 0; trial < 10; ++trial) {
    auto phi = invariant(random_model_form<double>(rng, m, 3, 4, 2));
    auto f = invariant(random_model_form<double>(rng, m, 0, 3, 2));
    const double L = 0.5 + trial * 0.3;
    auto tw = twist_gauge(phi, f, L);
    auto df = exterior_d(f);
    for (int p = 0; p < 5; ++p) {
      std::vector<double> x(7);
      for (auto& v : x) v = u(rng);
      auto want = pullback_linear(shear(evaluate_at(df, x), L), evaluate_at(phi, x));
      EXPECT_LE((evaluate_at(tw, x) - want).max_abs(), 1e-12);
    }
    // closedness is preserved and the inverse shear undoes the twist
    EXPECT_LE((exterior_d(twist_gauge(exterior_d(phi), f, L))).max_abs(), 1e-12);
    auto back = twist_gauge(tw, f * -1.0, L);
    for (int p = 0; p < 3; ++p) {
      std::vector<double> x(7);
      for (auto& v : x) v = u(rng);
      EXPECT_LE((evaluate_at(back, x) - evaluate_at(phi, x)).max_abs(), 1e-12);
    }
  }
}

TEST(Twisting, ConstantShearIsTrivial) {
  Rng rng(402);
  auto m = ModelManifold<double>::torus(7, 0);
  auto phi = invariant(random_model_form<double>(rng, m, 3, 4, 2));
  ModelForm<double> c(m, 0);
  c.add_constant(AltForm<double>::scalar(7, 2.5));
  EXPECT_TRUE(twist_gauge(phi, c, 1.0) == phi);
}

TEST(Twisting, RejectsBadInputs) {
  Rng rng(403);
  auto m = ModelManifold<double>::torus(7, 0);
  auto phi = invariant(random_model_form<double>(rng, m, 3, 4, 2));
  ModelForm<double> f(m, 0);
  f.add_cos({1, 0, 0, 0, 0, 0, 0}, unit_profile<double>(), AltForm<double>::scalar(7, 1.0));
  EXPECT_THROW(twist_gauge(phi, f, 1.0), TwistError);
  ModelForm<double> g(m, 0);
  EXPECT_THROW(twist_gauge(phi, g, 0.0), TwistError);
  ModelForm<double> bad(m, 3);
  bad.add_sin({1, 0, 0, 0, 0, 0, 0}, unit_profile<double>(), AltForm<double>::monomial(7, {1, 2, 3}));
  EXPECT_THROW(twist_gauge(bad, g, 1.0), TwistError);
}

TEST(Twisting, UntwistRecoversPrimitive) {
  Rng rng(404);
  auto m = ModelManifold<double>::torus(7, 0);
  auto phi = invariant(random_model_form<double>(rng, m, 3, 4, 2));
  auto f = invariant(random_model_form<double>(rng, m, 0, 3, 2));

  ModelForm<double> z(m, 1);
  z.add_constant(AltForm<double>::monomial(7, {0}, 1.5));
  z = z + exterior_d(f);
  auto u = untwist_cover(phi, z);
  EXPECT_DOUBLE_EQ(u.L, 1.5);
  EXPECT_LE((exterior_d(u.f) - exterior_d(f)).max_abs(), 1e-12);
  EXPECT_LE((twist_gauge(u.product, u.f, u.L) - phi).max_abs(), 1e-12);

  ModelForm<double> harm(m, 1);
  harm.add_constant(AltForm<double>::monomial(7, {0}, 1.0));
  harm.add_constant(AltForm<double>::monomial(7, {2}, 0.3));
  EXPECT_THROW(untwist_cover(phi, harm), TwistError);
  ModelForm<double> neg(m, 1);
  neg.add_constant(AltForm<double>::monomial(7, {0}, -1.0));
  EXPECT_THROW(untwist_cover(phi, neg), TwistError);
}
