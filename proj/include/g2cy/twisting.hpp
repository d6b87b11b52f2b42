#pragma once

// Theta shears of S^1-invariant forms on model manifolds M x S^1. The shear
// (x, theta) -> (x, theta + f(x)/L) pulls d theta back to d theta + df/L and
// leaves theta-independent coefficients alone.

#include <stdexcept>
#include <utility>

#include "g2cy/model_form.hpp"

namespace g2cy {

class TwistError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// phi = A + dtheta ^ B  ->  A + (dtheta + df/L) ^ B.
template <class S>
ModelForm<S> twist_gauge(const ModelForm<S>& phi, const ModelForm<S>& f, const S& L) {
  const auto& m = phi.manifold();
  if (m.theta < 0) throw ModelFormError("twist_gauge: manifold has no circle factor");
  if (!(L > S(0))) throw TwistError("twist_gauge: L must be positive");
  if (f.degree() != 0 || !(f.manifold() == m)) throw ModelFormError("twist_gauge: f must be a function on the same manifold");
  if (s1_invariance_defect(phi) != 0.0) throw TwistError("twist_gauge: form is not S^1-invariant");
  if (s1_invariance_defect(f) != 0.0) throw TwistError("twist_gauge: f depends on theta");
  if (phi.degree() == 0) return phi;
  // B = i_{d/dtheta} phi
  ModelForm<S> B(m, phi.degree() - 1);
  for (const auto& [key, c] : phi.terms()) {
    auto b = interior_basis(m.theta, c);
    if (!b.is_zero()) B.add(key.k, key.profile, b);
  }
  ModelForm<S> out = phi + wedge(exterior_d(f), B) * S(S(1) / L);
  out.set_decay_rate(phi.decay_rate());
  return out;
}

/// The covering shear x -> (x, theta - f(x)/L) together with the product form.
template <class S>
struct Untwisting {
  ModelForm<S> product;  // Re Omega + L dtheta ^ omega
  ModelForm<S> f;        // primitive of v
  S L;
};

/// Spectral primitive of an exact 1-form on a torus.
template <class S>
ModelForm<S> torus_primitive(const ModelForm<S>& v) {
  const auto& m = v.manifold();
  if (m.kind != ManifoldKind::torus) throw ModelFormError("torus_primitive needs a torus");
  if (v.degree() != 1) throw DimensionError("torus_primitive needs a 1-form");
  if (!harmonic_project(v).is_zero()) throw TwistError("1-form has a nonzero harmonic part");
  if (!exterior_d(v).is_zero()) throw TwistError("1-form is not closed");
  using C = Complex<S>;
  ModelForm<S> f(m, 0);
  for (const auto& [key, c] : v.terms()) {
    // v_k = i nu f_k: read f_k off the first direction with nu_j != 0
    for (int j = 0; j < v.dim(); ++j) {
      if (key.k[static_cast<std::size_t>(j)] == 0) continue;
      C vj = c.coeff(Mask(1) << j);
      C fk = vj / C(S(0), v.frequency(key.k, j));
      f.add(key.k, key.profile, AltForm<C>::scalar(v.dim(), fk));
      break;
    }
  }
  return f;
}

/// Splits z = L dtheta + v, checks that v = df and returns the product form
/// Re Omega + L dtheta ^ omega obtained by pulling back along the inverse shear.
template <class S>
Untwisting<S> untwist_cover(const ModelForm<S>& phi, const ModelForm<S>& z) {
  const auto& m = phi.manifold();
  if (m.kind != ManifoldKind::torus || m.theta < 0) throw ModelFormError("untwist_cover needs a torus with a circle factor");
  const Mask th = Mask(1) << m.theta;
  std::optional<S> L;
  ModelForm<S> v(m, 1);
  for (const auto& [key, c] : z.terms())
    for (const auto& [mask, val] : c.terms()) {
      if (mask == th) {
        if (!ModelForm<S>::is_zero_index(key.k) || !is_zero(val.im)) throw TwistError("theta component of z is not constant");
        L = val.re;
      } else {
        AltForm<Complex<S>> one(m.dim(), 1);
        one.add(mask, val);
        v.add(key.k, key.profile, one);
      }
    }
  if (!L || !(*L > S(0))) throw TwistError("z must have a positive constant theta component");
  auto f = torus_primitive(v);
  return {twist_gauge(phi, f * S(-1), *L), f, *L};
}

}  // namespace g2cy
