#pragma once

// Cohomology-level bookkeeping on flat model tori: class vectors, the Kunneth
// split of degree-3 classes on M x S^1, twisting classes and the relations
// between glued and solved classes.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "g2cy/alt_form.hpp"
#include "g2cy/correspondence.hpp"
#include "g2cy/model_form.hpp"

namespace g2cy {

class ModuliError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A class on a flat torus, stored as its constant representative.
template <class S>
struct CohomologyVector {
  AltForm<S> rep;
  std::vector<std::string> coordinate_labels;

  int degree() const { return rep.degree(); }
  int dim() const { return rep.dim(); }

  /// "e1^e3" style labels of the constant monomial basis, in basis order.
  std::vector<std::string> basis_labels() const {
    std::vector<std::string> out;
    for (Mask m : masks_of_degree(rep.dim(), rep.degree())) {
      std::string s;
      for (int i : indices_of(m)) {
        if (!s.empty()) s += "^";
        s += coordinate_labels.empty() ? "e" + std::to_string(i) : "d" + coordinate_labels[static_cast<std::size_t>(i)];
      }
      out.push_back(s.empty() ? "1" : s);
    }
    return out;
  }
  /// Coordinates in the basis of basis_labels().
  std::vector<S> coordinates() const {
    std::vector<S> out;
    for (Mask m : masks_of_degree(rep.dim(), rep.degree())) out.push_back(rep.coeff(m));
    return out;
  }
  friend CohomologyVector wedge(const CohomologyVector& a, const CohomologyVector& b) {
    return {wedge(a.rep, b.rep), a.coordinate_labels};
  }
  friend bool operator==(const CohomologyVector& a, const CohomologyVector& b) { return a.rep == b.rep; }
};

/// H^3(M x S^1) = H^3(M) + H^2(M): split by the circle leg. Both parts are
/// returned as forms on M (the slots other than `theta`, relabelled).
template <class S>
std::pair<AltForm<S>, AltForm<S>> kunneth3(const AltForm<S>& cls, int theta = 0) {
  if (cls.degree() != 3) throw DimensionError("kunneth3 expects a degree-3 class");
  const int n = cls.dim();
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (i != theta) keep.push_back(i);
  AltForm<S> flat(n, 3);
  for (const auto& [m, c] : cls.terms())
    if (!(m >> theta & 1)) flat.add(m, c);
  return {restrict_to(flat, keep), restrict_to(interior_basis(theta, cls), keep)};
}

/// Inverse of kunneth3: a + dtheta ^ b.
template <class S>
AltForm<S> reassemble3(const AltForm<S>& a3, const AltForm<S>& b2, int theta = 0) {
  if (a3.dim() != b2.dim() || a3.degree() != 3 || b2.degree() != 2) throw DimensionError("reassemble3: shape mismatch");
  const int n = a3.dim() + 1;
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (i != theta) keep.push_back(i);
  return extend_to(a3, n, keep) + wedge(AltForm<S>::monomial(n, {theta}), extend_to(b2, n, keep));
}

template <class S>
struct TwistingClass {
  S L;
  AltForm<double> v;  // class of the part without a circle leg, on the full slot set
};

/// (L, [v]) of a closed circle-invariant 1-form z = L dtheta + v.
template <class S>
TwistingClass<S> twisting_class(const ModelForm<S>& z) {
  const auto& m = z.manifold();
  if (z.degree() != 1) throw DimensionError("twisting_class expects a 1-form");
  if (m.theta < 0) throw ModelFormError("twisting_class: no circle factor");
  if (!exterior_d(z).is_zero()) throw ModuliError("twisting_class: z is not closed");
  if (s1_invariance_defect(z) != 0.0) throw ModuliError("twisting_class: z depends on theta");
  const Mask th = Mask(1) << m.theta;
  std::optional<S> L;
  ModelForm<S> v(m, 1);
  for (const auto& [key, c] : z.terms())
    for (const auto& [mask, val] : c.terms()) {
      if (mask == th) {
        if (!ModelForm<S>::is_zero_index(key.k) || !key.profile.is_constant() || !is_zero(val.im))
          throw ModuliError("twisting_class: theta component of z is not constant");
        L = L.value_or(S(0)) + val.re;
      } else {
        AltForm<Complex<S>> one(m.dim(), 1);
        one.add(mask, val);
        v.add(key.k, key.profile, one);
      }
    }
  if (!L || !(*L > S(0))) throw ModuliError("twisting_class: L must be positive (theta component of z)");
  AltForm<double> vc(m.dim(), 1);
  if (m.kind == ManifoldKind::cylinder) {
    auto lim = asymptotic_limit(v);
    if (has_dt_leg(lim)) throw ModuliError("twisting_class: the limit of z has a dt component");
    for (const auto& [key, c] : lim.terms())
      if (ModelForm<S>::is_zero_index(key.k))
        for (const auto& [mask, val] : c.terms()) vc.add(mask, to_double(val.re));
  } else {
    vc = class_vector(v);
  }
  return {*L, vc};
}

/// ([Re Omega], [omega]) of closed forms on a torus.
template <class S>
std::pair<AltForm<double>, AltForm<double>> su3_coordinates(const ModelForm<S>& re, const ModelForm<S>& omega) {
  if (re.degree() != 3 || omega.degree() != 2) throw DimensionError("su3_coordinates: expected a 3-form and a 2-form");
  if (!exterior_d(re).is_zero() || !exterior_d(omega).is_zero()) throw ModuliError("su3_coordinates: forms must be closed");
  return {class_vector(re), class_vector(omega)};
}

/// b3 + b2 - b1 - 1.
inline long msu3_dimension(long b1, long b2, long b3) {
  if (b1 < 0 || b2 < 0 || b3 < 0) throw std::invalid_argument("Betti numbers must be nonnegative");
  return b3 + b2 - b1 - 1;
}

/// Betti numbers of M x S^1 from those of M (Kunneth).
inline long product_b3(long b2, long b3) { return b3 + b2; }

struct ClassRelation {
  std::string name;
  std::string statement;
  double residual = 0.0;
  bool passed = false;
};

/// Measured classes of a solved structure phi = Re Omega + (L' dtheta + v) ^ omega
/// against the glued classes, all as constant forms on the 7 slots.
struct GluedClassInputs {
  double L = 1.0;       // input twisting length
  double L_measured = 1.0;
  AltForm<double> re, omega, v;                     // measured
  AltForm<double> glued_re, glued_omega, glued_v;   // classes of the glued inputs
};

struct GluedClassReport {
  double c = 1.0;
  std::vector<ClassRelation> relations;
  bool passed() const {
    for (const auto& r : relations)
      if (!r.passed) return false;
    return true;
  }
};

inline GluedClassReport glued_class_check(const GluedClassInputs& in, double tol) {
  if (!(in.L > 0.0) || !(in.L_measured > 0.0)) throw ModuliError("glued_class_check: L and L' must be positive");
  GluedClassReport r;
  r.c = in.L_measured / in.L;
  auto add = [&](std::string name, std::string statement, double res) {
    r.relations.push_back({std::move(name), std::move(statement), res, res <= tol});
  };
  add("re_omega", "[Re Omega] = [gamma_T(Re Omega_1, Re Omega_2)]", (in.re - in.glued_re).max_abs());
  add("omega", "[omega] = (1/c) [gamma_T(omega_1, omega_2)]", (in.omega - in.glued_omega * (1.0 / r.c)).max_abs());
  add("v", "[v] = c [gamma_T(v_1, v_2)]", (in.v - in.glued_v * r.c).max_abs());
  add("primitive", "[Re Omega] ^ [omega] = 0", wedge(in.re, in.omega).max_abs());
  return r;
}

}  // namespace g2cy
