#include <gtest/gtest.h>

#include <cmath>

#include "g2cy/model_form.hpp"
#include "model_helpers.hpp"

using namespace g2cy;
using namespace g2cy::testing;

namespace {

using Q = Rational;

AltForm<Q> e(int dim, std::vector<int> idx) { return AltForm<Q>::monomial(dim, idx); }

// d by central differences of point evaluations; independent of exterior_d.
AltForm<double> fd_derivative(const ModelForm<Q>& a, std::vector<double> x, double h = 1e-5) {
  const int n = a.dim();
  AltForm<double> out(n, a.degree() + 1);
  for (int j = 0; j < n; ++j) {
    auto xp = x, xm = x;
    xp[static_cast<std::size_t>(j)] += h;
    xm[static_cast<std::size_t>(j)] -= h;
    auto diff = (evaluate_at(a, xp) - evaluate_at(a, xm)) * (1.0 / (2 * h));
    out += wedge(AltForm<double>::monomial(n, {j}), diff);
  }
  return out;
}

}  // namespace

TEST(ExteriorD, ConstantsAreClosed) {
  auto m = ModelManifold<Q>::torus(6);
  ModelForm<Q> a(m, 2);
  a.add_constant(e(6, {0, 1}) + e(6, {2, 3}));
  EXPECT_TRUE(exterior_d(a).is_zero());
}

TEST(ExteriorD, DecayingConstantForm) {
  auto m = ModelManifold<Q>::cylinder7();
  ModelForm<Q> a(m, 2);
  a.add_cos(a.zero_index(), decay_profile<Q>(0, Q(1)), e(7, {1, 2}));
  ModelForm<Q> expect(m, 3);
  expect.add_cos(a.zero_index(), decay_profile<Q>(0, Q(1)), -wedge(e(7, {6}), e(7, {1, 2})));
  EXPECT_EQ(exterior_d(a), expect);
}

TEST(ExteriorD, SquareIsZeroOnRandomForms) {
  Rng rng(101);
  auto cyl = ModelManifold<Q>::cylinder7();
  auto tor = ModelManifold<Q>::torus(6);
  for (int trial = 0; trial < 500; ++trial) {
    const auto& m = trial % 2 ? cyl : tor;
    int deg = 1 + trial % 4;
    auto a = random_model_form<Q>(rng, m, deg, 3);
    EXPECT_TRUE(exterior_d(exterior_d(a)).is_zero());
  }
}

TEST(ExteriorD, LeibnizRule) {
  Rng rng(102);
  auto m = ModelManifold<Q>::cylinder7();
  for (int trial = 0; trial < 60; ++trial) {
    int p = 1 + trial % 3;
    auto a = random_model_form<Q>(rng, m, p, 2);
    auto b = random_model_form<Q>(rng, m, 2, 2);
    auto lhs = exterior_d(wedge(a, b));
    auto rhs = wedge(exterior_d(a), b) + wedge(a, exterior_d(b)) * Q(p % 2 ? -1 : 1);
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(ExteriorD, MatchesFiniteDifferencesOfPointValues) {
  Rng rng(103);
  auto m = ModelManifold<Q>::cylinder7();
  m.scales = {Q(1), Q(2), Q(1), Q(3, 2), Q(1), Q(1), Q(1)};
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_model_form<Q>(rng, m, 2, 3);
    std::vector<double> x{0.3, 1.1, -0.4, 2.0, 0.9, -1.3, 1.37 + 0.2 * trial};
    auto exact = evaluate_at(exterior_d(a), x);
    auto fd = fd_derivative(a, x);
    EXPECT_LE((exact - fd).max_abs(), 1e-6);
  }
}

TEST(ModelForm, RealityIsPreserved) {
  Rng rng(104);
  auto m = ModelManifold<Q>::cylinder7();
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_model_form<Q>(rng, m, 2, 3);
    auto b = random_model_form<Q>(rng, m, 1, 3);
    EXPECT_TRUE(a.is_real());
    EXPECT_TRUE(exterior_d(a).is_real());
    EXPECT_TRUE(wedge(a, b).is_real());
  }
}

TEST(HarmonicProject, ConstantPlusExact) {
  Rng rng(105);
  auto m = ModelManifold<Q>::torus(6);
  for (int trial = 0; trial < 30; ++trial) {
    ModelForm<Q> c(m, 2);
    c.add_constant(random_form<Q>(rng, 6, 2));
    auto beta = random_model_form<Q>(rng, m, 1, 4);
    EXPECT_EQ(harmonic_project(c), c);
    EXPECT_TRUE(harmonic_project(exterior_d(beta)).is_zero());
    EXPECT_EQ(harmonic_project(c + exterior_d(beta)), c);
    auto gam = random_model_form<Q>(rng, m, 2, 4);
    EXPECT_EQ(harmonic_project(harmonic_project(c + gam)), harmonic_project(gam + c));
  }
  EXPECT_THROW(harmonic_project(ModelForm<Q>(ModelManifold<Q>::cylinder7(), 1)), ModelFormError);
}

TEST(AsymptoticLimit, DropsDecayAndKeepsDtLeg) {
  auto m = ModelManifold<Q>::cylinder7();
  ModelForm<Q> a(m, 2);
  a.add_constant(e(7, {1, 2}));
  a.add_cos({0, 1, 0, 0, 0, 0, 0}, decay_profile<Q>(1, Q(2)), e(7, {3, 4}));
  ModelForm<Q> lim(m, 2);
  lim.add_constant(e(7, {1, 2}));
  EXPECT_EQ(asymptotic_limit(a), lim);

  ModelForm<Q> b(m, 2);
  b.add_constant(e(7, {3, 6}));
  b.add_cos(b.zero_index(), decay_profile<Q>(0, Q(1)), e(7, {1, 2}));
  EXPECT_TRUE(has_dt_leg(asymptotic_limit(b)));
  EXPECT_FALSE(has_dt_leg(asymptotic_limit(a)));

  ModelForm<Q> grow(m, 1);
  grow.add_cos(grow.zero_index(), decay_profile<Q>(1, Q(0)), e(7, {1}));
  EXPECT_THROW(asymptotic_limit(grow), ModelFormError);
}

TEST(AsymptoticLimit, CommutesWithWedgeAndD) {
  Rng rng(106);
  auto m = ModelManifold<Q>::cylinder7();
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_model_form<Q>(rng, m, 1 + trial % 2, 3);
    auto b = random_model_form<Q>(rng, m, 2, 3);
    EXPECT_EQ(asymptotic_limit(wedge(a, b)), wedge(asymptotic_limit(a), asymptotic_limit(b)));
    EXPECT_EQ(asymptotic_limit(exterior_d(a)), exterior_d(asymptotic_limit(a)));
  }
}

TEST(ExactPrimitiveOnEnd, Examples) {
  auto m = ModelManifold<Q>::cylinder7();
  ModelForm<Q> a(m, 3);
  auto beta = e(7, {1, 2});
  a.add_cos(a.zero_index(), decay_profile<Q>(0, Q(1)), wedge(e(7, {6}), beta));
  ModelForm<Q> expect(m, 2);
  expect.add_cos(expect.zero_index(), decay_profile<Q>(0, Q(1)), -beta);
  EXPECT_EQ(exact_primitive_on_end(a), expect);
  EXPECT_TRUE(exact_primitive_on_end(ModelForm<Q>(m, 2)).is_zero());

  Rng rng(107);
  for (int trial = 0; trial < 40; ++trial) {
    ModelForm<Q> gamma(m, 2);
    for (int i = 0; i < 3; ++i) {
      FourierIndex k(7, 0);
      k[static_cast<std::size_t>(1 + i)] = static_cast<int>(rng() % 3);
      gamma.add_cos(k, decay_profile<Q>(static_cast<int>(rng() % 3), Q(1 + static_cast<int>(rng() % 2))),
                    random_form<Q>(rng, 7, 2, 1.0, 0.3));
    }
    auto alpha = exterior_d(gamma);
    EXPECT_EQ(exterior_d(exact_primitive_on_end(alpha)), alpha);
  }
  ModelForm<Q> open(m, 2);
  open.add_cos(open.zero_index(), decay_profile<Q>(0, Q(1)), beta);
  EXPECT_THROW(exact_primitive_on_end(open), ModelFormError);
}

TEST(WeightedNorm, LimitDecayAndErrors) {
  auto m = ModelManifold<double>::cylinder7();
  auto beta = AltForm<double>::monomial(7, {1, 2}) * 3.0;
  ModelForm<double> lim(m, 2);
  lim.add_cos({0, 1, 0, 0, 0, 0, 0}, unit_profile<double>(), beta);
  EXPECT_NEAR(weighted_norm(lim, 0.5, 0), 3.0, 1e-12);

  const double delta = 0.5;
  ModelForm<double> fast(m, 2);
  fast.add_cos(fast.zero_index(), decay_profile<double>(0, 2 * delta), beta);
  double n = weighted_norm(fast, delta, 2);
  EXPECT_TRUE(std::isfinite(n));
  EXPECT_GT(n, 0.0);

  ModelForm<double> slow(m, 2);
  slow.add_cos(slow.zero_index(), decay_profile<double>(0, delta / 2), beta);
  EXPECT_THROW(weighted_norm(slow, delta, 0), ModelFormError);
}

TEST(WeightedNorm, TriangleAndHomogeneity) {
  Rng rng(108);
  auto m = ModelManifold<double>::cylinder7();
  for (int trial = 0; trial < 20; ++trial) {
    ModelForm<double> a(m, 2), b(m, 2);
    for (auto* f : {&a, &b})
      for (int i = 0; i < 3; ++i) {
        FourierIndex k(7, 0);
        k[static_cast<std::size_t>(1 + rng() % 5)] = static_cast<int>(rng() % 3);
        f->add_cos(k, decay_profile<double>(static_cast<int>(rng() % 2), 1.0 + static_cast<double>(rng() % 3)),
                   random_form<double>(rng, 7, 2, 1.0, 0.3));
      }
    for (int k = 0; k <= 2; ++k) {
      double na = weighted_norm(a, 0.5, k, 30.0, 600), nb = weighted_norm(b, 0.5, k, 30.0, 600);
      EXPECT_LE(weighted_norm(a + b, 0.5, k, 30.0, 600), na + nb + 1e-10);
      EXPECT_NEAR(weighted_norm(a * -2.5, 0.5, k, 30.0, 600), 2.5 * na, 1e-10 * (1 + na));
    }
  }
}

TEST(S1Invariance, DefectOfModes) {
  auto m = ModelManifold<Q>::torus(7, 0);
  ModelForm<Q> a(m, 1);
  a.add_constant(e(7, {1}));
  EXPECT_EQ(s1_invariance_defect(a), 0.0);
  ModelForm<Q> b(m, 1);
  b.add({1, 0, 0, 0, 0, 0, 0}, unit_profile<Q>(), e(7, {2}).map<Complex<Q>>([](const Q& v) { return Complex<Q>(v); }));
  EXPECT_NEAR(s1_invariance_defect(b), 1.0, 1e-15);
  Rng rng(109);
  auto r = random_model_form<Q>(rng, m, 3, 6);
  EXPECT_EQ(s1_invariance_defect(harmonic_project(r)), 0.0);
  EXPECT_THROW(s1_invariance_defect(ModelForm<Q>(ModelManifold<Q>::torus(6), 1)), ModelFormError);
}
