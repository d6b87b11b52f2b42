#pragma once

// Seeded generators for random forms, matrices and structures. Rational
// draws use small numerators and denominators so exact arithmetic stays cheap.

#include <cstdint>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "g2cy/alt_form.hpp"

namespace g2cy {

using Rng = std::mt19937_64;

/// Seed for the i-th independent trial of a run seeded with `seed`.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32), 0x9e37u};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

/// Uniform in roughly [-scale, scale]: p/q with |p| <= 4q for rationals.
template <class S>
S random_scalar(Rng& rng, double scale = 1.0) {
  if constexpr (std::is_same_v<S, Rational>) {
    std::uniform_int_distribution<int> den(1, 4);
    int q = den(rng);
    int lim = std::max(1, static_cast<int>(scale * q));
    std::uniform_int_distribution<int> num(-lim, lim);
    return Rational(num(rng)) / Rational(q);
  } else {
    std::uniform_real_distribution<double> u(-scale, scale);
    return S(u(rng));
  }
}

template <class S>
Vec<S> random_vector(Rng& rng, int n, double scale = 1.0) {
  Vec<S> v;
  for (int i = 0; i < n; ++i) v.push_back(random_scalar<S>(rng, scale));
  return v;
}

/// Random k-form with every monomial present independently with probability
/// `density`.
template <class S>
AltForm<S> random_form(Rng& rng, int dim, int degree, double scale = 1.0, double density = 1.0) {
  AltForm<S> f(dim, degree);
  std::bernoulli_distribution keep(density);
  for (Mask m : masks_of_degree(dim, degree))
    if (keep(rng)) f.add(m, random_scalar<S>(rng, scale));
  return f;
}

/// Identity plus a random perturbation of size `spread`, conditioned on
/// det > 0.
template <class S>
Matrix<S> random_gl_plus(Rng& rng, int n, double spread = 0.5) {
  for (;;) {
    Matrix<S> A = Matrix<S>::identity(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) += random_scalar<S>(rng, spread);
    if (sign_of(determinant(A)) > 0) return A;
  }
}

/// 2-norm condition number, evaluated in double precision.
template <class S>
double condition_number(const Matrix<S>& A) {
  Eigen::MatrixXd M(A.rows(), A.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) M(i, j) = to_double(A(i, j));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
}

/// random_gl_plus restricted to condition number <= max_condition. Float
/// round trips through a frame lose about condition * eps.
template <class S>
Matrix<S> random_gl_plus_bounded(Rng& rng, int n, double max_condition, double spread = 0.5) {
  for (;;) {
    Matrix<S> A = random_gl_plus<S>(rng, n, spread);
    if (condition_number(A) <= max_condition) return A;
  }
}

template <class S>
Matrix<S> random_gl(Rng& rng, int n, double spread = 0.5) {
  for (;;) {
    Matrix<S> A = Matrix<S>::identity(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) += random_scalar<S>(rng, spread);
    if (sign_of(determinant(A)) != 0) return A;
  }
}

/// A^T A for random invertible A (so sqrt(det) is exact for rationals).
template <class S>
BilinearForm<S> random_spd(Rng& rng, int n, double spread = 0.5) {
  Matrix<S> A = random_gl<S>(rng, n, spread);
  return BilinearForm<S>(A.transpose() * A);
}

}  // namespace g2cy
