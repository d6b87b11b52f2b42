#pragma once

// Pointwise dictionary between SU(3) structures on a 6-dimensional space V
// and G2 structures on V + R. Coordinates on the 7-dimensional space put the
// circle direction in slot `theta` (0 by default); forms on V live in the
// remaining six slots, in order.

#include <optional>
#include <stdexcept>
#include <vector>

#include "g2cy/g2.hpp"
#include "g2cy/su3.hpp"

namespace g2cy {

class NotComplementaryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Slots of V inside the 7-dimensional space.
inline std::vector<int> v_slots(int theta = 0) {
  std::vector<int> out;
  for (int i = 0; i < 7; ++i)
    if (i != theta) out.push_back(i);
  return out;
}

/// Pull a form on V back to V + R along the projection.
template <class S>
AltForm<S> lift_from_v(const AltForm<S>& a, int theta = 0) {
  return extend_to(a, 7, v_slots(theta));
}

/// True when no monomial of `a` contains the theta leg.
template <class S>
bool has_no_theta_leg(const AltForm<S>& a, int theta = 0) {
  for (const auto& [m, c] : a.terms())
    if (m >> theta & 1) return false;
  return true;
}

/// A 1-form z on V + R whose theta component is nonzero.
template <class S>
class Twisting {
 public:
  Twisting() = default;
  explicit Twisting(AltForm<S> z, int theta = 0) : z_(std::move(z)), theta_(theta) {
    if (z_.dim() != 7 || z_.degree() != 1) throw DimensionError("twisting must be a 1-form on R^7");
    S c = theta_component();
    if constexpr (is_exact_v<S>) {
      if (is_zero(c)) throw NotComplementaryError("twisting has zero theta component");
    } else {
      if (std::abs(to_double(c)) < 1e-8) throw NotComplementaryError("twisting is nearly tangent to V");
    }
  }

  const AltForm<S>& form() const { return z_; }
  int theta() const { return theta_; }
  S theta_component() const { return z_.coeff(Mask(1) << theta_); }
  int orientation() const { return sign_of(theta_component()); }
  Twisting operator-() const { return Twisting(-z_, theta_); }

  friend bool operator==(const Twisting& a, const Twisting& b) { return a.theta_ == b.theta_ && a.z_ == b.z_; }

 private:
  AltForm<S> z_{7, 1};
  int theta_ = 0;
};

template <class S>
struct CorrespondenceTriple {
  Twisting<S> z;
  SU3Structure<S> s;

  friend bool operator==(const CorrespondenceTriple& a, const CorrespondenceTriple& b) { return a.z == b.z && a.s == b.s; }
};

/// phi = Re Omega + z ^ omega.
template <class S>
AltForm<S> assemble_phi(const Twisting<S>& z, const SU3Structure<S>& s) {
  const int th = z.theta();
  return lift_from_v(s.re, th) + wedge(z.form(), lift_from_v(s.omega, th));
}

template <class S>
G2Structure<S> g2_from_su3(const CorrespondenceTriple<S>& t, double tol = 1e-10) {
  auto v = validate_su3(t.s, tol);
  if (!v.passed()) throw NotSU3Error("g2_from_su3: " + v.summary());
  return G2Structure<S>(assemble_phi(t.z, t.s));
}

/// z (x) z + g_{Omega,omega} lifted to V + R.
template <class S>
BilinearForm<S> product_metric(const CorrespondenceTriple<S>& t) {
  auto [I, g6] = acs_and_metric(t.s);
  const int th = t.z.theta();
  auto slots = v_slots(th);
  Matrix<S> g(7, 7);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) g(slots[static_cast<std::size_t>(i)], slots[static_cast<std::size_t>(j)]) = g6.matrix()(i, j);
  auto zc = components(t.z.form());
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) g(i, j) += zc[static_cast<std::size_t>(i)] * zc[static_cast<std::size_t>(j)];
  return BilinearForm<S>(g);
}

/// Decomposes phi against a given unit conormal z of V. Returns nothing when
/// z is not a unit conormal or the pieces fail to form an SU(3) structure.
template <class S>
std::optional<CorrespondenceTriple<S>> decompose_with(const G2Structure<S>& phi, const AltForm<S>& z, int theta = 0,
                                                      double tol = 1e-10) {
  const Matrix<S>& ginv = phi.inverse_metric();
  auto zc = components(z);
  Vec<S> zs = ginv * zc;
  auto small = [&](const S& x) {
    if constexpr (is_exact_v<S>) return is_zero(x);
    else return std::abs(to_double(x)) <= tol;
  };
  // unit length and orthogonal to every covector without a theta leg
  S len(0);
  for (int i = 0; i < 7; ++i) len += zc[static_cast<std::size_t>(i)] * zs[static_cast<std::size_t>(i)];
  if (!small(S(len - S(1)))) return std::nullopt;
  for (int i = 0; i < 7; ++i)
    if (i != theta && !small(zs[static_cast<std::size_t>(i)])) return std::nullopt;

  AltForm<S> omega7 = interior(zs, phi.phi());
  AltForm<S> re7 = phi.phi() - wedge(z, omega7);
  AltForm<S> im7 = -interior(zs, phi.dual());
  auto drop = [&](const AltForm<S>& a) {
    AltForm<S> out(7, a.degree());
    for (const auto& [m, c] : a.terms())
      if (!(m >> theta & 1)) out.add(m, c);
      else if (!small(c)) return std::optional<AltForm<S>>{};
    return std::optional<AltForm<S>>{restrict_to(out, v_slots(theta))};
  };
  auto re = drop(re7), im = drop(im7), om = drop(omega7);
  if (!re || !im || !om) return std::nullopt;
  SU3Structure<S> s{*re, *im, *om};
  if (!validate_su3(s, tol).passed()) return std::nullopt;
  return CorrespondenceTriple<S>{Twisting<S>(z, theta), s};
}

/// Unit conormal (d/dtheta)^flat / |d/dtheta| times the orientation sign.
template <class S>
AltForm<S> unit_conormal(const G2Structure<S>& phi, int orientation, int theta = 0) {
  if (orientation != 1 && orientation != -1) throw std::invalid_argument("orientation must be +1 or -1");
  const Matrix<S>& g = phi.metric().matrix();
  S norm;
  if constexpr (is_exact_v<S>) norm = exact_sqrt(g(theta, theta));
  else {
    using std::sqrt;
    norm = sqrt(g(theta, theta));
  }
  AltForm<S> z(7, 1);
  for (int i = 0; i < 7; ++i) z.add(Mask(1) << i, S(g(theta, i) * S(orientation) / norm));
  return z;
}

/// The triple with positive (or negative) theta component of z.
template <class S>
CorrespondenceTriple<S> su3_from_g2(const G2Structure<S>& phi, int orientation = 1, int theta = 0, double tol = 1e-10) {
  auto t = decompose_with(phi, unit_conormal(phi, orientation, theta), theta, tol);
  if (!t) throw NotSU3Error("su3_from_g2: decomposition failed");
  return *t;
}

template <class S>
CorrespondenceTriple<S> su3_from_g2(const AltForm<S>& phi, int orientation = 1, int theta = 0, double tol = 1e-10) {
  return su3_from_g2(G2Structure<S>(phi), orientation, theta, tol);
}

/// (-z, conj Omega, -omega).
template <class S>
CorrespondenceTriple<S> sign_twin(const CorrespondenceTriple<S>& t) {
  return {-t.z, t.s.conjugate()};
}

/// All unit covectors g_phi-orthogonal to the annihilator of d/dtheta,
/// computed from a null space rather than from the flat of d/dtheta.
template <class S>
std::vector<AltForm<S>> enumerate_conormals(const G2Structure<S>& phi, int theta = 0, double tol = 1e-10) {
  const Matrix<S>& ginv = phi.inverse_metric();
  Matrix<S> rows(6, 7);
  int r = 0;
  for (int i = 0; i < 7; ++i) {
    if (i == theta) continue;
    for (int j = 0; j < 7; ++j) rows(r, j) = ginv(i, j);
    ++r;
  }
  auto ker = null_space(rows, tol);
  std::vector<AltForm<S>> out;
  if (ker.size() != 1) return out;
  const Vec<S>& k = ker.front();
  S len(0);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) len += k[static_cast<std::size_t>(i)] * ginv(i, j) * k[static_cast<std::size_t>(j)];
  S scale;
  if constexpr (is_exact_v<S>) scale = exact_sqrt(len);
  else {
    using std::sqrt;
    scale = sqrt(len);
  }
  for (int sgn : {1, -1}) {
    AltForm<S> z(7, 1);
    for (int i = 0; i < 7; ++i) z.add(Mask(1) << i, S(k[static_cast<std::size_t>(i)] * S(sgn) / scale));
    out.push_back(z);
  }
  return out;
}

/// Every decomposition of phi over a unit conormal of V.
template <class S>
std::vector<CorrespondenceTriple<S>> enumerate_triples(const G2Structure<S>& phi, int theta = 0, double tol = 1e-10) {
  std::vector<CorrespondenceTriple<S>> out;
  for (const auto& z : enumerate_conormals(phi, theta, tol))
    if (auto t = decompose_with(phi, z, theta, tol)) out.push_back(*t);
  return out;
}

}  // namespace g2cy
