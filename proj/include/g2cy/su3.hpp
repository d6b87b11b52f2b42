#pragma once

// SU(3) structures (Omega, omega) on R^6: the five defining conditions, the
// Hitchin dual Re Omega -> Im Omega, and the induced complex structure/metric.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "g2cy/alt_form.hpp"

namespace g2cy {

class NotSU3Error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotStableError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class S>
struct SU3Structure {
  AltForm<S> re;     // Re Omega, degree 3 on R^6
  AltForm<S> im;     // Im Omega
  AltForm<S> omega;  // degree 2 on R^6

  /// (conj Omega, -omega): the structure with the reversed complex structure.
  SU3Structure conjugate() const { return {re, -im, -omega}; }
  friend bool operator==(const SU3Structure& a, const SU3Structure& b) {
    return a.re == b.re && a.im == b.im && a.omega == b.omega;
  }
};

/// Omega = (e1 + i e2)(e3 + i e4)(e5 + i e6), omega = e12 + e34 + e56.
template <class S>
SU3Structure<S> standard_su3() {
  SU3Structure<S> s{AltForm<S>(6, 3), AltForm<S>(6, 3), AltForm<S>(6, 2)};
  s.re.add(mask_of({0, 2, 4}), S(1));
  s.re.add(mask_of({0, 3, 5}), S(-1));
  s.re.add(mask_of({1, 2, 5}), S(-1));
  s.re.add(mask_of({1, 3, 4}), S(-1));
  s.im.add(mask_of({0, 2, 5}), S(1));
  s.im.add(mask_of({0, 3, 4}), S(1));
  s.im.add(mask_of({1, 2, 4}), S(1));
  s.im.add(mask_of({1, 3, 5}), S(-1));
  s.omega.add(mask_of({0, 1}), S(1));
  s.omega.add(mask_of({2, 3}), S(1));
  s.omega.add(mask_of({4, 5}), S(1));
  return s;
}

/// The block rotation I e_{2k} = e_{2k+1} of the standard structure.
template <class S>
Matrix<S> standard_complex_structure() {
  Matrix<S> I(6, 6);
  for (int k = 0; k < 3; ++k) {
    I(2 * k + 1, 2 * k) = S(1);
    I(2 * k, 2 * k + 1) = S(-1);
  }
  return I;
}

/// (a^{3/2} Omega, a omega); exact for rationals only when a is a square.
template <class S>
SU3Structure<S> rescale(const S& a, const SU3Structure<S>& s) {
  if (sign_of(a) <= 0) throw std::invalid_argument("rescale: factor must be positive");
  S r = exact_sqrt(a);
  S r3 = r * r * r;
  return {s.re * r3, s.im * r3, s.omega * a};
}

template <class S>
SU3Structure<S> pullback_su3(const Matrix<S>& A, const SU3Structure<S>& s) {
  return {pullback_linear(A, s.re), pullback_linear(A, s.im), pullback_linear(A, s.omega)};
}

/// Top coefficient of Omega ^ conj(Omega) = -2i Re ^ Im.
template <class S>
Complex<S> omega_wedge_conj(const AltForm<S>& re, const AltForm<S>& im) {
  S t = top_coefficient(wedge(re, im));
  return {S(0), S(S(-2) * t)};
}

/// Antisymmetric matrix W(a, b) = omega(e_a, e_b).
template <class S>
Matrix<S> two_form_matrix(const AltForm<S>& w) {
  if (w.degree() != 2) throw DimensionError("two_form_matrix expects a 2-form");
  Matrix<S> m(w.dim(), w.dim());
  for (const auto& [mask, c] : w.terms()) {
    auto idx = indices_of(mask);
    m(idx[0], idx[1]) = c;
    m(idx[1], idx[0]) = -c;
  }
  return m;
}

/// Derivation action of an endomorphism A on forms:
/// (D_A a)(v1..vk) = sum_j a(v1, .., A vj, .., vk).
template <class S>
AltForm<S> derivation(const Matrix<S>& A, const AltForm<S>& a) {
  const int n = a.dim();
  AltForm<S> out(n, a.degree());
  for (const auto& [m, c] : a.terms()) {
    auto idx = indices_of(m);
    for (std::size_t slot = 0; slot < idx.size(); ++slot) {
      // replace e^{idx[slot]} by A^* e^{idx[slot]} = sum_i A(idx, i) e^i
      for (int i = 0; i < n; ++i) {
        const S& aij = A(idx[slot], i);
        if (is_zero(aij)) continue;
        std::vector<int> rep = idx;
        rep[slot] = i;
        out += AltForm<S>::monomial(n, rep, S(c * aij));
      }
    }
  }
  return out;
}

struct SU3Condition {
  bool passed = false;
  double residual = 0.0;
  std::string detail;
};

template <class S>
struct SU3Validation {
  // (i) decomposable, (ii) Omega ^ conj Omega != 0, (iii) normalisation,
  // (iv) omega ^ Omega = 0, (v) positivity of omega(., I.)
  std::array<SU3Condition, 5> conditions;
  std::optional<Matrix<S>> I;
  std::optional<BilinearForm<S>> g;

  bool passed() const {
    for (const auto& c : conditions)
      if (!c.passed) return false;
    return true;
  }
  double max_residual() const {
    double r = 0;
    for (const auto& c : conditions) r = std::max(r, c.residual);
    return r;
  }
  std::string summary() const {
    std::string s;
    const char* names[5] = {"i", "ii", "iii", "iv", "v"};
    for (int k = 0; k < 5; ++k)
      s += std::string(names[k]) + (conditions[static_cast<std::size_t>(k)].passed ? ":pass " : ":FAIL ");
    return s;
  }
};

namespace detail {

/// Kernel of beta -> beta ^ Omega on complex covectors. Returns the basis and
/// a residual (0 exactly in rational mode; relative singular value in float).
template <class S>
std::pair<std::vector<Vec<Complex<S>>>, double> decomposability_kernel(const AltForm<S>& re, const AltForm<S>& im,
                                                                      double tol) {
  const int n = re.dim();
  std::vector<Mask> rows = masks_of_degree(n, 4);
  Matrix<Complex<S>> M(static_cast<int>(rows.size()), n);
  for (int j = 0; j < n; ++j) {
    AltForm<S> ej = AltForm<S>::monomial(n, {j});
    AltForm<S> wr = wedge(ej, re);
    AltForm<S> wi = wedge(ej, im);
    for (std::size_t r = 0; r < rows.size(); ++r) M(static_cast<int>(r), j) = Complex<S>(wr.coeff(rows[r]), wi.coeff(rows[r]));
  }
  if constexpr (is_exact_v<S>) {
    (void)tol;
    auto ker = null_space(M);
    return {ker, ker.size() == 3 ? 0.0 : 1.0};
  } else {
    Eigen::MatrixXcd E(M.rows(), M.cols());
    for (int r = 0; r < M.rows(); ++r)
      for (int c = 0; c < M.cols(); ++c) E(r, c) = {to_double(M(r, c).re), to_double(M(r, c).im)};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(E, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv.size() < 6 || sv(0) == 0.0) return {{}, 1.0};
    double residual = sv(3) / sv(0);
    std::vector<Vec<Complex<S>>> ker;
    if (sv(2) / sv(0) <= tol) return {ker, 1.0};  // kernel too large: Omega is degenerate
    for (int c = 3; c < 6; ++c) {
      Vec<Complex<S>> v(6);
      for (int i = 0; i < 6; ++i) v[static_cast<std::size_t>(i)] = Complex<S>(S(svd.matrixV()(i, c).real()), S(svd.matrixV()(i, c).imag()));
      ker.push_back(v);
    }
    return {ker, residual};
  }
}

/// I with zeta o I = i zeta for the (1,0)-forms zeta spanning `ker`.
template <class S>
std::optional<Matrix<S>> complex_structure_from_kernel(const std::vector<Vec<Complex<S>>>& ker, double tol) {
  if (ker.size() != 3) return std::nullopt;
  Matrix<Complex<S>> B(6, 6);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 6; ++c) {
      B(r, c) = ker[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      B(r + 3, c) = conj(ker[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    }
  Matrix<Complex<S>> D(6, 6);
  for (int k = 0; k < 3; ++k) {
    D(k, k) = Complex<S>(S(0), S(1));
    D(k + 3, k + 3) = Complex<S>(S(0), S(-1));
  }
  Matrix<Complex<S>> Ic;
  try {
    Ic = solve(B, D * B);
  } catch (const SingularMatrixError&) {
    return std::nullopt;
  }
  Matrix<S> I(6, 6);
  double imag = 0;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      I(r, c) = Ic(r, c).re;
      imag = std::max(imag, magnitude(Ic(r, c).im));
    }
  if constexpr (is_exact_v<S>) {
    if (imag != 0) return std::nullopt;
  } else {
    if (imag > std::sqrt(tol)) return std::nullopt;
  }
  return I;
}

template <class S>
double scaled(double residual, double scale) {
  return residual / std::max(1.0, scale);
}

}  // namespace detail

/// Checks the five conditions. `tol` is a relative tolerance in float mode
/// and ignored in rational mode (where every test is exact).
template <class S>
SU3Validation<S> validate_su3(const AltForm<S>& re, const AltForm<S>& im, const AltForm<S>& omega, double tol = 1e-10) {
  if (re.dim() != 6 || im.dim() != 6 || omega.dim() != 6 || re.degree() != 3 || im.degree() != 3 || omega.degree() != 2)
    throw DimensionError("validate_su3 expects 3-forms and a 2-form on R^6");
  constexpr bool exact = is_exact_v<S>;
  SU3Validation<S> v;
  auto pass = [&](double r) { return exact ? r == 0.0 : r <= tol; };

  // (i)
  auto [ker, r1] = detail::decomposability_kernel(re, im, tol);
  v.conditions[0] = {ker.size() == 3 && pass(r1), r1, "kernel dimension " + std::to_string(ker.size())};

  // (ii)
  S vol_coeff = top_coefficient(wedge(re, im));
  double scale_omega = std::max(re.max_abs(), im.max_abs());
  double r2 = magnitude(vol_coeff);
  bool nondeg = exact ? r2 != 0.0 : r2 > tol * std::max(1.0, scale_omega * scale_omega);
  v.conditions[1] = {nondeg, nondeg ? 0.0 : 1.0, "|Omega ^ conj Omega| = " + std::to_string(2 * r2)};

  // (iii) Re ^ Im = (2/3) omega^3
  S w3 = top_coefficient(wedge(wedge(omega, omega), omega));
  S diff3 = vol_coeff - ratio<S>(2, 3) * w3;
  double r3 = detail::scaled<S>(magnitude(diff3), magnitude(vol_coeff));
  v.conditions[2] = {pass(r3), r3, "Re^Im - (2/3) omega^3 = " + std::to_string(to_double(diff3))};

  // (iv)
  double r4 = std::max(wedge(omega, re).max_abs(), wedge(omega, im).max_abs());
  r4 = detail::scaled<S>(r4, scale_omega * std::max(1.0, omega.max_abs()));
  v.conditions[3] = {pass(r4), r4, "|omega ^ Omega|"};

  // (v)
  SU3Condition c5{false, 1.0, "complex structure unavailable"};
  if (v.conditions[0].passed && v.conditions[1].passed) {
    auto I = detail::complex_structure_from_kernel(ker, tol);
    if (I) {
      v.I = *I;
      Matrix<S> G = two_form_matrix(omega) * (*I);
      double asym = (G - G.transpose()).max_abs();
      double ra = detail::scaled<S>(asym, G.max_abs());
      BilinearForm<S> g = BilinearForm<S>::symmetrized(G);
      bool pd = g.is_positive_definite();
      c5.residual = ra;
      c5.passed = pass(ra) && pd;
      c5.detail = pd ? "omega(., I.) positive-definite" : "omega(., I.) not positive-definite";
      if (c5.passed) v.g = g;
    }
  }
  v.conditions[4] = c5;
  return v;
}

template <class S>
SU3Validation<S> validate_su3(const SU3Structure<S>& s, double tol = 1e-10) {
  return validate_su3(s.re, s.im, s.omega, tol);
}

/// Complex structure and metric g(u, v) = omega(u, I v).
template <class S>
std::pair<Matrix<S>, BilinearForm<S>> acs_and_metric(const SU3Structure<S>& s, double tol = 1e-10) {
  SU3Validation<S> v = validate_su3(s, tol);
  if (!v.passed()) throw NotSU3Error("acs_and_metric: not an SU(3) structure (" + v.summary() + ")");
  return {*v.I, *v.g};
}

// ---------------------------------------------------------------------------
// Hitchin dual.

template <class S>
struct StabilityData {
  Matrix<S> K;  // K(v) defined by i_{K v} vol = (i_v rho) ^ rho
  S lambda;     // tr(K^2) / 6
};

template <class S>
StabilityData<S> stability_data(const AltForm<S>& rho) {
  if (rho.dim() != 6 || rho.degree() != 3) throw DimensionError("hitchin_dual expects a 3-form on R^6");
  Matrix<S> K(6, 6);
  const Mask all = full_mask(6);
  for (int a = 0; a < 6; ++a) {
    AltForm<S> kappa = wedge(interior_basis(a, rho), rho);
    for (int j = 0; j < 6; ++j) {
      S c = kappa.coeff(all & ~(Mask(1) << j));
      K(j, a) = (j % 2 == 0) ? c : S(-c);
    }
  }
  Matrix<S> K2 = K * K;
  S tr(0);
  for (int i = 0; i < 6; ++i) tr += K2(i, i);
  return {K, S(tr / S(6))};
}

namespace detail {
/// +1 or -1 so that the normalised K of Re Omega_std is the standard I.
inline int hitchin_sign() {
  static const int s = [] {
    auto d = stability_data(standard_su3<Rational>().re);
    return sign_of(d.K(1, 0));
  }();
  return s;
}
}  // namespace detail

/// rho_hat with rho + i rho_hat decomposable; hitchin_dual(Re Omega_std) =
/// Im Omega_std. Throws NotStableError unless lambda(rho) < 0.
template <class S>
std::pair<AltForm<S>, StabilityData<S>> hitchin_dual(const AltForm<S>& rho) {
  StabilityData<S> d = stability_data(rho);
  bool stable;
  if constexpr (is_exact_v<S>) {
    stable = sign_of(d.lambda) < 0;
  } else {
    double n2 = rho.max_abs() * rho.max_abs();
    stable = to_double(d.lambda) < -1e-10 * n2 * n2;
  }
  if (!stable) throw NotStableError("hitchin_dual: lambda(rho) >= 0, not stable of complex type");
  S root = exact_sqrt(S(-d.lambda));
  Matrix<S> I = d.K;
  I *= S(S(detail::hitchin_sign()) / root);
  AltForm<S> hat = derivation(I, rho) * ratio<S>(-1, 3);
  return {hat, d};
}

}  // namespace g2cy
