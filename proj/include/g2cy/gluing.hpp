#pragma once

// Cutoff gluing on desk models. Both pieces are cylinders [theta, x1..x5, t]
// over the same cross-section; the gluing map is the identity on the
// cross-section and t -> 2T - t, so the glued manifold is the neck torus with
// s in [0, 2T). Side 1 occupies s in [0, T] (t = s), side 2 occupies [T, 2T]
// (t = 2T - s, dt = -ds).

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "g2cy/model_form.hpp"

namespace g2cy {

class GluingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// h^{(order)}(t - a) as a profile on the end chart.
template <class S>
Profile<S> step_profile(const S& a, int order = 0) {
  Profile<S> p;
  p.factors.push_back({a, order});
  return p;
}

/// psi_T = 1 for t >= T - 1, 0 for t <= T - 2.
template <class S>
Profile<S> cutoff_psi(const S& T, int order = 0) {
  return step_profile(S(T - S(2)), order);
}

/// Negates every monomial with a leg along the end coordinate.
template <class S>
ModelForm<S> reflect_dt(const ModelForm<S>& a) {
  const int t = a.manifold().t;
  if (t < 0) throw ModelFormError("reflect_dt: no end coordinate");
  const Mask bit = Mask(1) << t;
  ModelForm<S> out(a.manifold(), a.degree());
  out.set_decay_rate(a.decay_rate());
  for (const auto& [key, c] : a.terms()) {
    AltForm<Complex<S>> r(a.dim(), a.degree());
    for (const auto& [mask, v] : c.terms()) r.add(mask, mask & bit ? -v : v);
    out.add(key.k, key.profile, r);
  }
  return out;
}

template <class S>
struct MatchingPair {
  ModelForm<S> first, second;
};

struct MatchReport {
  bool matched = false;
  double residual = 0.0;
};

/// Sum over terms of the Euclidean norm of the coefficient form.
template <class S>
double mode_norm(const ModelForm<S>& a) {
  double total = 0.0;
  for (const auto& [key, c] : a.terms()) {
    double n2 = 0.0;
    for (const auto& [mask, v] : c.terms()) {
      double re = to_double(v.re), im = to_double(v.im);
      n2 += re * re + im * im;
    }
    total += std::sqrt(n2);
  }
  return total;
}

/// Compares the first limit with the reflected second limit.
template <class S>
MatchReport match_check(const MatchingPair<S>& p, double tol = 1e-12) {
  const auto& m1 = p.first.manifold();
  if (m1.kind != ManifoldKind::cylinder || !(m1 == p.second.manifold()))
    throw GluingError("match_check: both forms must live on the same cylinder");
  if (p.first.degree() != p.second.degree()) throw DimensionError("match_check: degree mismatch");
  auto diff = asymptotic_limit(p.first) - reflect_dt(asymptotic_limit(p.second));
  MatchReport r;
  r.residual = mode_norm(diff);
  if constexpr (is_exact_v<S>) r.matched = diff.is_zero();
  else r.matched = r.residual <= tol;
  return r;
}

/// Transports a cylinder form to one side of the neck.
template <class S>
ModelForm<S> to_neck(const ModelForm<S>& a, int side, const S& T) {
  if (a.manifold().kind != ManifoldKind::cylinder) throw GluingError("to_neck expects a cylinder form");
  if (side != 1 && side != 2) throw std::invalid_argument("side must be 1 or 2");
  auto neck = ModelManifold<S>::neck7(T);
  const S twoT(S(2) * T);
  ModelForm<S> src = side == 1 ? a : reflect_dt(a);
  ModelForm<S> out(neck, a.degree());
  for (const auto& [key, c] : src.terms()) {
    Profile<S> p = key.profile;
    if (p.chart.dir != 1 || p.chart.shift != S(0)) throw GluingError("to_neck: profile not in the end chart");
    if (side == 1) {
      p.chart.domain = p.chart.domain.intersect(Interval<S>::closed(S(0), T));
    } else {
      Chart<S> ch{-1, twoT, {}};
      Interval<S> dom = ch.to_s(p.chart.domain);
      p.chart = ch;
      p.chart.domain = dom.intersect(Interval<S>::closed(T, twoT));
    }
    if (p.chart.domain.thin()) continue;
    out.add(key.k, p, c);
  }
  return out;
}

/// Constant-profile form carried over to the neck unchanged.
template <class S>
ModelForm<S> constant_to_neck(const ModelForm<S>& lim, const S& T) {
  ModelForm<S> out(ModelManifold<S>::neck7(T), lim.degree());
  for (const auto& [key, c] : lim.terms()) {
    if (!key.profile.is_constant()) throw GluingError("constant_to_neck: profile is not constant");
    out.add(key.k, unit_profile<S>(), c);
  }
  return out;
}

/// True when a vanishes identically for s <= lo and for s >= hi.
template <class S>
bool vanishes_outside(const ModelForm<S>& a, const S& lo, const S& hi) {
  return restrict_domain(a, Interval<S>{std::nullopt, lo}).is_zero() && restrict_domain(a, Interval<S>::from(hi)).is_zero();
}

/// Decaying part of a closed form on t >= 1 and its primitive there.
template <class S>
ModelForm<S> end_primitive(const ModelForm<S>& deviation) {
  return exact_primitive_on_end(restrict_domain(deviation, Interval<S>::from(S(1))));
}

template <class S>
struct SideModification {
  ModelForm<S> primitive;     // A with dA = alpha - alpha~ on t >= 1
  ModelForm<S> modification;  // alpha' - alpha~ = (1 - psi)(alpha - alpha~) - psi' dt ^ A
  ModelForm<S> change;        // alpha' - alpha
  bool support_ok = false;    // change vanishes for t < T - 2; alpha' = alpha~ for t >= T - 1
};

template <class S>
SideModification<S> modify_side(const ModelForm<S>& alpha, const S& T) {
  const auto& m = alpha.manifold();
  auto dev = alpha - asymptotic_limit(alpha);
  SideModification<S> r;
  r.primitive = end_primitive(dev);
  AltForm<S> dt = AltForm<S>::monomial(m.dim(), {m.t});
  auto psi_dev = multiply_profile(dev, cutoff_psi(T));
  auto ramp = wedge(dt, multiply_profile(r.primitive, cutoff_psi(T, 1)));
  r.change = -(psi_dev + ramp);
  r.modification = dev + r.change;
  r.support_ok = restrict_domain(r.change, Interval<S>{std::nullopt, S(T - S(2))}).is_zero() &&
                 restrict_domain(r.modification, Interval<S>::from(S(T - S(1)))).is_zero();
  return r;
}

template <class S>
struct GammaResult {
  ModelForm<S> neck;
  SideModification<S> side1, side2;
};

inline void check_neck_parameter(double T) {
  if (!(T >= 3.0)) throw GluingError("neck parameter T must be at least 3");
}

/// gamma_T(alpha_1, alpha_2) on the neck torus.
template <class S>
GammaResult<S> gamma_T_full(const MatchingPair<S>& p, const S& T) {
  check_neck_parameter(to_double(T));
  if (!exterior_d(p.first).is_zero() || !exterior_d(p.second).is_zero()) throw GluingError("gamma_T: inputs must be closed");
  auto mc = match_check(p);
  if (!mc.matched) throw GluingError("gamma_T: limits do not match (residual " + std::to_string(mc.residual) + ")");
  GammaResult<S> r;
  r.side1 = modify_side(p.first, T);
  r.side2 = modify_side(p.second, T);
  r.neck = constant_to_neck(asymptotic_limit(p.first), T) + to_neck(r.side1.modification, 1, T) +
           to_neck(r.side2.modification, 2, T);
  return r;
}

template <class S>
ModelForm<S> gamma_T(const MatchingPair<S>& p, const S& T) {
  return gamma_T_full(p, T).neck;
}

template <class S>
struct WedgeDefect {
  ModelForm<S> defect;     // gamma_T(a ^ b) - gamma_T(a) ^ gamma_T(b) on the neck
  ModelForm<S> primitive;  // d primitive = defect
  bool exact = false;      // d primitive == defect
  bool support_ok = false; // primitive supported in the two ramp annuli
  AltForm<double> harmonic;
};

namespace detail {

// One side of the primitive: P = Q - d(psi E) with
// Q = psi (A ^ b + (-1)^p a ^ B - H(c)) - psi A ^ d(psi B),
// K = A ^ b + (-1)^p a ^ B - A ^ dB - H(c) closed on t >= 1, E = H(K).
template <class S>
ModelForm<S> side_wedge_primitive(const ModelForm<S>& a, const ModelForm<S>& b, const S& T) {
  const int p = a.degree();
  const S sign(p % 2 ? -1 : 1);
  auto A = end_primitive(a - asymptotic_limit(a));
  auto B = end_primitive(b - asymptotic_limit(b));
  auto ab = wedge(a, b);
  auto Hc = end_primitive(ab - asymptotic_limit(ab));
  auto end = Interval<S>::from(S(1));
  auto ae = restrict_domain(a, end), be = restrict_domain(b, end);
  auto core = wedge(A, be) + wedge(ae, B) * sign - Hc;
  auto psi = cutoff_psi(T);
  ModelForm<S> psiB = multiply_profile(B, psi);
  auto Q = multiply_profile(core, psi) - multiply_profile(wedge(A, exterior_d(psiB)), psi);
  auto K = core - wedge(A, exterior_d(B));
  auto E = exact_primitive_on_end(K);
  return Q - exterior_d(multiply_profile(E, psi));
}

}  // namespace detail

template <class S>
WedgeDefect<S> wedge_defect_primitive(const MatchingPair<S>& pa, const MatchingPair<S>& pb, const S& T) {
  WedgeDefect<S> r;
  auto ga = gamma_T(pa, T), gb = gamma_T(pb, T);
  MatchingPair<S> prod{wedge(pa.first, pb.first), wedge(pa.second, pb.second)};
  r.defect = gamma_T(prod, T) - wedge(ga, gb);
  auto P1 = detail::side_wedge_primitive(pa.first, pb.first, T);
  auto P2 = detail::side_wedge_primitive(pa.second, pb.second, T);
  const S lo(T - S(2)), hi(T - S(1));
  r.support_ok = vanishes_outside(P1, lo, hi) && vanishes_outside(P2, lo, hi);
  r.primitive = to_neck(P1, 1, T) + to_neck(P2, 2, T);
  r.exact = exterior_d(r.primitive) == r.defect;
  r.harmonic = class_vector(r.defect);
  return r;
}

}  // namespace g2cy

namespace g2cy {

/// cap(t) t^m e^{-mu t} (cos or sin)(k.x) e_I on a cylinder, cap = h(t).
template <class S>
ModelForm<S> capped_mode(const ModelManifold<S>& m, const FourierIndex& k, bool cosine, int power, const S& mu,
                         const AltForm<S>& coeff) {
  Profile<S> p;
  p.m = power;
  p.mu = mu;
  p.factors.push_back({S(0), 0});
  ModelForm<S> out(m, coeff.degree());
  if (cosine) out.add_cos(k, p, coeff);
  else out.add_sin(k, p, coeff);
  return out;
}

}  // namespace g2cy
