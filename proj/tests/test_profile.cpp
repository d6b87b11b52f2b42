#include <gtest/gtest.h>

#include <cmath>

#include "g2cy/profile.hpp"

using namespace g2cy;

namespace {

using Q = Rational;

Profile<Q> decaying(int m, Q mu) {
  Profile<Q> p;
  p.m = m;
  p.mu = mu;
  return p;
}

}  // namespace

TEST(SmoothStep, FlatOutsideRampAndSymmetric) {
  EXPECT_EQ(smooth_step(-0.5), 0.0);
  EXPECT_EQ(smooth_step(0.0), 0.0);
  EXPECT_EQ(smooth_step(1.0), 1.0);
  EXPECT_EQ(smooth_step(3.0), 1.0);
  for (double s = 0.05; s < 1.0; s += 0.05) {
    EXPECT_NEAR(smooth_step(s) + smooth_step(1.0 - s), 1.0, 1e-14);
    EXPECT_GT(smooth_step(s + 0.01), smooth_step(s));
  }
  EXPECT_NEAR(smooth_step(0.5), 0.5, 1e-15);
}

TEST(SmoothStep, JetMatchesFiniteDifferences) {
  const double h = 1e-5;
  for (double s : {0.1, 0.3, 0.5, 0.77, 0.93}) {
    auto jet = smooth_step_jet(s, 5);
    auto up = smooth_step_jet(s + h, 4), dn = smooth_step_jet(s - h, 4);
    for (int k = 0; k < 4; ++k) {
      double fd = (up[static_cast<std::size_t>(k)] - dn[static_cast<std::size_t>(k)]) / (2 * h);
      EXPECT_NEAR(jet[static_cast<std::size_t>(k + 1)], fd, 1e-5 * (1 + std::abs(fd))) << "s=" << s << " k=" << k;
    }
  }
}

TEST(Profile, SimplifyDropsRedundantStepsAndVanishingProducts) {
  Profile<Q> p;
  p.factors = {{Q(0), 0}};
  p.chart.domain = Interval<Q>::from(Q(1));
  auto s = simplify(p);
  ASSERT_TRUE(s.has_value());
  EXPECT_TRUE(s->is_constant());

  Profile<Q> d;
  d.factors = {{Q(3), 1}};
  d.chart.domain = Interval<Q>::closed(Q(0), Q(3));
  EXPECT_FALSE(simplify(d).has_value());

  Profile<Q> a, b;
  a.factors = {{Q(0), 1}};
  b.factors = {{Q(5), 1}};
  EXPECT_FALSE(multiply(a, b).has_value());

  Profile<Q> lo, hi;
  lo.chart.domain = Interval<Q>::closed(Q(0), Q(2));
  hi.chart.domain = Interval<Q>::closed(Q(2), Q(4));
  EXPECT_FALSE(multiply(lo, hi).has_value());
}

TEST(Profile, ProductsInDifferentChartsMustBeDisjoint) {
  Profile<Q> a = decaying(0, Q(1)), b = decaying(0, Q(1));
  b.chart.dir = -1;
  b.chart.shift = Q(10);
  EXPECT_THROW(multiply(a, b), ProfileError);
  a.chart.domain = Interval<Q>::closed(Q(0), Q(5));
  b.chart.domain = Interval<Q>::closed(Q(5), Q(10));
  EXPECT_FALSE(multiply(a, b).has_value());
}

TEST(Profile, DegreeCapIsAnError) {
  Profile<Q> a = decaying(kMaxPolyDegree, Q(1)), b = decaying(1, Q(1));
  EXPECT_THROW(multiply(a, b), ProfileError);
}

TEST(Profile, DerivativeMatchesFiniteDifferences) {
  Profile<Q> p = decaying(2, Q(3, 2));
  p.factors = {{Q(1), 0}, {Q(1, 2), 1}};
  Profile<Q> r = p;
  r.chart.dir = -1;
  r.chart.shift = Q(4);
  for (const auto& prof : {p, r}) {
    auto dp = derivative(prof);
    for (double s : {0.7, 1.2, 1.6, 2.9, 3.3}) {
      double exact = 0.0;
      for (const auto& [c, q] : dp) exact += to_double(c) * evaluate(q, s);
      const double h = 1e-6;
      double fd = (evaluate(prof, s + h) - evaluate(prof, s - h)) / (2 * h);
      EXPECT_NEAR(exact, fd, 1e-6 * (1 + std::abs(fd)));
    }
  }
}

TEST(Profile, IntegrateStepDerivativeAndExponential) {
  Profile<Q> d;
  d.factors = {{Q(2), 1}};
  EXPECT_NEAR(integrate(d, -10.0, 10.0), 1.0, 1e-12);
  EXPECT_NEAR(integrate(decaying(0, Q(1)), 0.0, 50.0), 1.0 - std::exp(-50.0), 1e-12);
  EXPECT_NEAR(integrate(decaying(2, Q(1)), 0.0, 60.0), 2.0, 1e-10);
}

TEST(Profile, TailIntegralIsExactPrimitive) {
  for (int m = 0; m <= 4; ++m)
    for (Q mu : {Q(1), Q(3, 2), Q(5)}) {
      auto c = tail_integral_coefficients(m, mu);
      // d/dt sum_j c_j t^j e^{-mu t} must equal -t^m e^{-mu t}
      std::vector<Q> poly(static_cast<std::size_t>(m + 1), Q(0));
      for (int j = 0; j <= m; ++j) {
        poly[static_cast<std::size_t>(j)] -= mu * c[static_cast<std::size_t>(j)];
        if (j > 0) poly[static_cast<std::size_t>(j - 1)] += Q(j) * c[static_cast<std::size_t>(j)];
      }
      for (int j = 0; j < m; ++j) EXPECT_EQ(poly[static_cast<std::size_t>(j)], Q(0));
      EXPECT_EQ(poly[static_cast<std::size_t>(m)], Q(-1));
    }
  EXPECT_THROW(tail_integral_coefficients(1, Q(0)), ProfileError);
}
