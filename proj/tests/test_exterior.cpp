#include <gtest/gtest.h>

#include "g2cy/alt_form.hpp"
#include "g2cy/g2.hpp"
#include "g2cy/random.hpp"

using namespace g2cy;

namespace {

using Q = Rational;

AltForm<Q> e(std::vector<int> idx, int dim = 7) { return AltForm<Q>::monomial(dim, idx); }

// Brute-force evaluation of a k-form on k vectors via the permutation sum.
template <class S>
S evaluate(const AltForm<S>& a, const std::vector<Vec<S>>& vs) {
  const int k = a.degree();
  S total(0);
  for (const auto& [m, c] : a.terms()) {
    auto idx = indices_of(m);
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = i;
    do {
      int inv = 0;
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
          if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inv;
      S p = c;
      for (int i = 0; i < k; ++i) p *= vs[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])])];
      if (inv % 2) total -= p; else total += p;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return total;
}

}  // namespace

TEST(Wedge, DisjointAndRepeatedIndices) {
  EXPECT_EQ(wedge(e({0}), e({1, 2})), e({0, 1, 2}));
  EXPECT_TRUE(wedge(e({0}), e({0, 1})).is_zero());
  EXPECT_EQ(wedge(e({2}), e({0, 1})), e({0, 1, 2}));
  EXPECT_EQ(wedge(e({1}), e({0})), -e({0, 1}));
}

TEST(Wedge, CanonicalStorage) {
  AltForm<Q> a = e({0, 1}) + e({0, 1}) * Q(-1);
  EXPECT_TRUE(a.is_zero());
  EXPECT_EQ(a.size(), 0u);
  AltForm<Q> b = AltForm<Q>::monomial(7, {3, 1, 2});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b.coeff({1, 2, 3}), Q(1));  // (3,1,2) is an even permutation
}

TEST(Wedge, AssociativeAndGradedCommutativeExactly) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<int> deg(0, 3);
    int p = deg(rng), q = deg(rng), r = deg(rng);
    auto a = random_form<Q>(rng, 7, p, 2.0, 0.4);
    auto b = random_form<Q>(rng, 7, q, 2.0, 0.4);
    auto c = random_form<Q>(rng, 7, r, 2.0, 0.4);
    if (p + q + r <= 7) EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
    Q sign = ((p * q) % 2) ? Q(-1) : Q(1);
    if (p + q <= 7) EXPECT_EQ(wedge(a, b), wedge(b, a) * sign);
  }
}

TEST(Interior, Examples) {
  EXPECT_EQ(interior_basis(0, e({0, 1})), e({1}));
  AltForm<Q> phi = standard_phi_form<Q>();
  EXPECT_EQ(interior_basis(0, phi), e({1, 2}) + e({3, 4}) + e({5, 6}));
  EXPECT_TRUE(interior_basis(1, interior_basis(1, phi)).is_zero());
}

TEST(Interior, AntiderivationOnRandomInputs) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> deg(1, 3);
    int p = deg(rng), q = deg(rng);
    auto a = random_form<Q>(rng, 7, p, 2.0, 0.5);
    auto b = random_form<Q>(rng, 7, q, 2.0, 0.5);
    auto v = random_vector<Q>(rng, 7, 2.0);
    AltForm<Q> lhs = interior(v, wedge(a, b));
    AltForm<Q> rhs = wedge(interior(v, a), b) + wedge(a, interior(v, b)) * ((p % 2) ? Q(-1) : Q(1));
    EXPECT_EQ(lhs, rhs);
    if (p >= 2) EXPECT_TRUE(interior(v, interior(v, a)).is_zero());
  }
}

TEST(Interior, MatchesBruteForceEvaluation) {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_form<Q>(rng, 6, 3);
    std::vector<Vec<Q>> vs;
    for (int i = 0; i < 3; ++i) vs.push_back(random_vector<Q>(rng, 6));
    AltForm<Q> ia = interior(vs[0], a);
    EXPECT_EQ(evaluate(ia, {vs[1], vs[2]}), evaluate(a, vs));
  }
}

TEST(Hodge, OrthonormalMonomials) {
  auto g7 = BilinearForm<Q>::euclidean(7);
  auto o7 = OrientedFrame::standard(7);
  EXPECT_EQ(hodge(e({0, 1, 2}), g7, o7), e({3, 4, 5, 6}));
  auto g6 = BilinearForm<Q>::euclidean(6);
  EXPECT_EQ(hodge(AltForm<Q>::scalar(6, Q(1)), g6, OrientedFrame::standard(6)), e({0, 1, 2, 3, 4, 5}, 6));
  EXPECT_EQ(hodge(AltForm<Q>::scalar(7, Q(1)), g7, o7.reversed()), -e({0, 1, 2, 3, 4, 5, 6}));
}

TEST(Hodge, DoubleStarSign) {
  Rng rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = random_spd<Q>(rng, 7);
    auto o = OrientedFrame::standard(7, trial % 2 ? 1 : -1);
    std::uniform_int_distribution<int> deg(0, 7);
    int k = deg(rng);
    auto a = random_form<Q>(rng, 7, k, 1.0, 0.3);
    Q sign = ((k * (7 - k)) % 2) ? Q(-1) : Q(1);
    EXPECT_EQ(hodge(hodge(a, g, o), g, o), a * sign);
  }
}

TEST(Hodge, InnerProductIdentityExact) {
  Rng rng(15);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = random_spd<Q>(rng, 6);
    auto o = OrientedFrame::standard(6);
    std::uniform_int_distribution<int> deg(0, 6);
    int k = deg(rng);
    auto a = random_form<Q>(rng, 6, k, 1.0, 0.5);
    auto b = random_form<Q>(rng, 6, k, 1.0, 0.5);
    AltForm<Q> lhs = volume_form(g, o) * inner(a, b, g);
    EXPECT_EQ(lhs, wedge(a, hodge(b, g, o)));
  }
}

TEST(Hodge, InnerProductIdentityFloat) {
  Rng rng(16);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = random_spd<double>(rng, 7);
    auto o = OrientedFrame::standard(7);
    std::uniform_int_distribution<int> deg(0, 7);
    int k = deg(rng);
    auto a = random_form<double>(rng, 7, k);
    auto b = random_form<double>(rng, 7, k);
    AltForm<double> diff = volume_form(g, o) * inner(a, b, g) - wedge(a, hodge(b, g, o));
    EXPECT_LE(diff.max_abs(), 1e-12 * std::max(1.0, a.max_abs() * b.max_abs() * 100));
  }
}

TEST(Hodge, RejectsIndefiniteMetric) {
  Matrix<Q> m = Matrix<Q>::identity(7);
  m(3, 3) = Q(-1);
  EXPECT_THROW(hodge(e({0}), BilinearForm<Q>(m), OrientedFrame::standard(7)), NotPositiveDefiniteError);
}

TEST(Pullback, IdentityScalingAndMultiplicativity) {
  Rng rng(17);
  auto a = random_form<Q>(rng, 7, 3);
  EXPECT_EQ(pullback_linear(Matrix<Q>::identity(7), a), a);
  Matrix<Q> d = Matrix<Q>::identity(7);
  d(0, 0) = Q(2);
  EXPECT_EQ(pullback_linear(d, e({0, 1})), e({0, 1}) * Q(2));
  for (int trial = 0; trial < 50; ++trial) {
    auto A = random_gl<Q>(rng, 7);
    auto B = random_gl<Q>(rng, 7);
    auto x = random_form<Q>(rng, 7, 2, 1.0, 0.4);
    auto y = random_form<Q>(rng, 7, 3, 1.0, 0.3);
    EXPECT_EQ(pullback_linear(A, wedge(x, y)), wedge(pullback_linear(A, x), pullback_linear(A, y)));
    EXPECT_EQ(pullback_linear(A * B, x), pullback_linear(B, pullback_linear(A, x)));
  }
}

TEST(Pullback, MatchesBruteForceEvaluation) {
  Rng rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    auto A = random_gl<Q>(rng, 6);
    auto a = random_form<Q>(rng, 6, 3);
    std::vector<Vec<Q>> vs, Avs;
    for (int i = 0; i < 3; ++i) {
      vs.push_back(random_vector<Q>(rng, 6));
      Avs.push_back(A * vs.back());
    }
    EXPECT_EQ(evaluate(pullback_linear(A, a), vs), evaluate(a, Avs));
  }
}

TEST(FlatSharp, ExamplesAndRoundTrip) {
  auto g = BilinearForm<Q>::euclidean(7);
  Vec<Q> e1(7, Q(0));
  e1[0] = Q(1);
  EXPECT_EQ(flat(e1, g), e({0}));
  Matrix<Q> d = Matrix<Q>::identity(7);
  d(0, 0) = Q(4);
  EXPECT_EQ(flat(e1, BilinearForm<Q>(d)), e({0}) * Q(4));
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    auto h = random_spd<Q>(rng, 7);
    auto v = random_vector<Q>(rng, 7);
    EXPECT_EQ(sharp(flat(v, h), h), v);
    auto w = random_vector<Q>(rng, 7);
    auto fv = components(flat(v, h));
    Q acc(0);
    for (int i = 0; i < 7; ++i) acc += fv[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
    EXPECT_EQ(h(v, w), acc);
  }
  Matrix<Q> z(7, 7);
  EXPECT_THROW(flat(e1, BilinearForm<Q>(z)), SingularMatrixError);
}
