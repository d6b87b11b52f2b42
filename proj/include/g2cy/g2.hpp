#pragma once

// G2 structures on R^7: recognition, the induced metric and volume, the dual
// 4-form and the 7 + 14 splitting of 2-forms.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "g2cy/alt_form.hpp"

namespace g2cy {

class NotG2Error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// e123 + e145 + e167 + e246 - e257 - e347 - e356 (1-based labels).
template <class S>
AltForm<S> standard_phi_form() {
  AltForm<S> phi(7, 3);
  const int terms[7][4] = {{0, 1, 2, 1}, {0, 3, 4, 1}, {0, 5, 6, 1}, {1, 3, 5, 1},
                           {1, 4, 6, -1}, {2, 3, 6, -1}, {2, 4, 5, -1}};
  for (const auto& t : terms) phi.add(mask_of({t[0], t[1], t[2]}), S(t[3]));
  return phi;
}

inline void check_g2_shape(int dim, int degree) {
  if (dim != 7 || degree != 3) throw DimensionError("expected a 3-form on R^7");
}

/// b(u, v) = top coefficient of i_u phi ^ i_v phi ^ phi on coordinate vectors.
template <class S>
BilinearForm<S> b_form(const AltForm<S>& phi) {
  check_g2_shape(phi.dim(), phi.degree());
  std::vector<AltForm<S>> contracted;
  for (int i = 0; i < 7; ++i) contracted.push_back(interior_basis(i, phi));
  Matrix<S> b(7, 7);
  for (int i = 0; i < 7; ++i) {
    AltForm<S> left = wedge(contracted[static_cast<std::size_t>(i)], phi);
    for (int j = i; j < 7; ++j) {
      S v = top_coefficient(wedge(left, contracted[static_cast<std::size_t>(j)]));
      // i_u phi ^ phi ^ i_v phi = i_u phi ^ i_v phi ^ phi (even reordering)
      b(i, j) = v;
      b(j, i) = v;
    }
  }
  return BilinearForm<S>(b);
}

template <class S>
struct G2Metric {
  BilinearForm<S> g;
  AltForm<S> vol;
  /// vol = sigma e^1..e^7; sign(sigma) is the orientation induced by phi.
  S sigma;
  int orientation = 1;
};

struct PositivityReport {
  bool positive = false;
  std::string reason;
};

namespace detail {
template <class S>
S six_pow7() {
  return S(279936);
}
}  // namespace detail

/// Positivity without taking the ninth root: phi is a G2 form iff
/// sign(det b) * b is positive-definite.
template <class S>
PositivityReport is_positive_g2(const AltForm<S>& phi) {
  PositivityReport r;
  if (phi.dim() != 7 || phi.degree() != 3) {
    r.reason = "not a 3-form on R^7";
    return r;
  }
  BilinearForm<S> b = b_form(phi);
  S det = determinant(b.matrix());
  int s = sign_of(det);
  if (s == 0) {
    r.reason = "b_form is degenerate (det = 0)";
    return r;
  }
  if constexpr (!is_exact_v<S>) {
    if (magnitude(det) < 1e-300) {
      r.reason = "b_form is numerically degenerate";
      return r;
    }
  }
  Matrix<S> m = b.matrix();
  if (s < 0) m *= S(-1);
  if (!is_positive_definite(m)) {
    r.reason = "b_form is indefinite (form outside the positive orbit)";
    return r;
  }
  r.positive = true;
  return r;
}

/// Metric normalised by i_u phi ^ i_v phi ^ phi = 6 g(u,v) vol_g.
template <class S>
G2Metric<S> metric_from_g2(const AltForm<S>& phi) {
  PositivityReport pos = is_positive_g2(phi);
  if (!pos.positive) throw NotG2Error("not a G2 structure: " + pos.reason);
  BilinearForm<S> b = b_form(phi);
  S det = determinant(b.matrix());
  S sigma = real_root(S(det / detail::six_pow7<S>()), 9);
  Matrix<S> g = b.matrix();
  g *= S(S(1) / (S(6) * sigma));
  G2Metric<S> out{BilinearForm<S>::symmetrized(g), AltForm<S>(7, 7), sigma, sign_of(sigma)};
  out.vol.add(full_mask(7), sigma);
  return out;
}

/// *_phi phi for the metric and orientation induced by phi.
template <class S>
AltForm<S> hodge_dual_g2(const AltForm<S>& phi, const G2Metric<S>& m) {
  return hodge_with(phi, inverse(m.g.matrix()), m.sigma);
}

template <class S>
AltForm<S> hodge_dual_g2(const AltForm<S>& phi) {
  return hodge_dual_g2(phi, metric_from_g2(phi));
}

/// A certified G2 form with its cached metric data.
template <class S>
class G2Structure {
 public:
  explicit G2Structure(AltForm<S> phi) : phi_(std::move(phi)), metric_(metric_from_g2(phi_)) {
    ginv_ = inverse(metric_.g.matrix());
    dual_ = hodge_with(phi_, ginv_, metric_.sigma);
  }

  const AltForm<S>& phi() const { return phi_; }
  const BilinearForm<S>& metric() const { return metric_.g; }
  const Matrix<S>& inverse_metric() const { return ginv_; }
  const AltForm<S>& volume() const { return metric_.vol; }
  const AltForm<S>& dual() const { return dual_; }
  const S& sigma() const { return metric_.sigma; }
  OrientedFrame frame() const { return OrientedFrame::standard(7, metric_.orientation); }

  /// Hodge star of the induced metric and orientation.
  AltForm<S> star(const AltForm<S>& a) const { return hodge_with(a, ginv_, metric_.sigma); }
  S inner(const AltForm<S>& a, const AltForm<S>& b) const {
    AltForm<S> raised = pullback_linear(ginv_, b);
    S acc(0);
    for (const auto& [m, c] : a.terms()) acc += c * raised.coeff(m);
    return acc;
  }

 private:
  AltForm<S> phi_;
  G2Metric<S> metric_;
  Matrix<S> ginv_;
  AltForm<S> dual_;
};

template <class S>
G2Structure<S> standard_phi() {
  return G2Structure<S>(standard_phi_form<S>());
}

// ---------------------------------------------------------------------------
// Two-forms: the 7-dimensional piece spanned by i_v phi and its orthogonal
// 14-dimensional complement.

template <class S>
class TwoFormSplitting {
 public:
  explicit TwoFormSplitting(const G2Structure<S>& s) : s_(s) {
    for (int i = 0; i < 7; ++i) basis_.push_back(interior_basis(i, s.phi()));
    Matrix<S> gram(7, 7);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) gram(i, j) = s.inner(basis_[static_cast<std::size_t>(i)], basis_[static_cast<std::size_t>(j)]);
    gram_inv_ = inverse(gram);
  }

  const std::vector<AltForm<S>>& basis7() const { return basis_; }

  AltForm<S> project7(const AltForm<S>& beta) const {
    if (beta.dim() != 7 || beta.degree() != 2) throw DimensionError("split2 expects a 2-form on R^7");
    Vec<S> rhs(7);
    for (int i = 0; i < 7; ++i) rhs[static_cast<std::size_t>(i)] = s_.inner(basis_[static_cast<std::size_t>(i)], beta);
    Vec<S> c = gram_inv_ * rhs;
    AltForm<S> out(7, 2);
    for (int i = 0; i < 7; ++i) out += basis_[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
    return out;
  }

  std::pair<AltForm<S>, AltForm<S>> split(const AltForm<S>& beta) const {
    AltForm<S> b7 = project7(beta);
    return {b7, beta - b7};
  }

  /// Matrix of the projection onto the 7-piece in the monomial basis of
  /// Lambda^2 (columns = images of e^{ij} in increasing order).
  Matrix<S> projector_matrix() const {
    std::vector<Mask> mono = masks_of_degree(7, 2);
    Matrix<S> p(21, 21);
    for (int c = 0; c < 21; ++c) {
      AltForm<S> e(7, 2);
      e.add(mono[static_cast<std::size_t>(c)], S(1));
      AltForm<S> img = project7(e);
      for (int r = 0; r < 21; ++r) p(r, c) = img.coeff(mono[static_cast<std::size_t>(r)]);
    }
    return p;
  }

 private:
  G2Structure<S> s_;
  std::vector<AltForm<S>> basis_;
  Matrix<S> gram_inv_;
};

template <class S>
std::pair<AltForm<S>, AltForm<S>> split2(const G2Structure<S>& s, const AltForm<S>& beta) {
  return TwoFormSplitting<S>(s).split(beta);
}

}  // namespace g2cy
