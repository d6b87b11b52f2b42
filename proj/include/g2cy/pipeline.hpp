#pragma once

// Glue two perturbed flat cylinders carrying SU(3) structures and twistings,
// remove the torsion of the circle-invariant G2 structure on the neck torus
// and read off the Calabi-Yau data and its classes.

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "g2cy/correspondence.hpp"
#include "g2cy/gluing.hpp"
#include "g2cy/grid.hpp"
#include "g2cy/moduli.hpp"
#include "g2cy/su3.hpp"
#include "g2cy/torsion_solver.hpp"

namespace g2cy {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pipeline failure tagged with the stage that raised it.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what) : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// amplitude * d(h(t) t^power e^{-rate t} (cos|sin)(k.x) e_I) added to one
/// piece of one side. Targets: re_omega, im_omega, omega (I of degree 2, 1)
/// and f (I empty: the twisting gains d of the function).
struct PerturbationSpec {
  std::string target;
  int side = 1;
  std::vector<int> mode;  // over x1..x5
  bool cosine = true;
  int power = 0;
  Rational rate{1};
  Rational amplitude{0};
  std::vector<int> primitive;  // slots in [theta, x1..x5, t]
};

struct GluingConfig {
  Rational T{5};
  Rational L{1};                           // dtheta coefficient of both twistings
  std::vector<Rational> harmonic_v{0, 0, 0, 0, 0};  // constant x1..x5 part of both twistings
  std::vector<PerturbationSpec> perturbations;
  SolveOptions solver;
  int positivity_points = 9;
  double class_tolerance = 1e-8;
};

inline void validate_config(const GluingConfig& c) {
  if (!(c.L > Rational(0))) throw ConfigError("twisting.L: must be positive");
  if (c.harmonic_v.size() != 5) throw ConfigError("twisting.v: expected 5 components (x1..x5)");
  if (to_double(c.T) < 3.0) throw ConfigError("T: must be at least 3");
  if (c.positivity_points < 2) throw ConfigError("positivity_points: must be at least 2");
  if (c.solver.points < 2) throw ConfigError("solver.points: must be at least 2");
  if (!(c.solver.tolerance > 0.0)) throw ConfigError("solver.tolerance: must be positive");
  if (c.solver.max_iterations < 0) throw ConfigError("solver.max_iterations: must be nonnegative");
  for (std::size_t i = 0; i < c.perturbations.size(); ++i) {
    const auto& p = c.perturbations[i];
    const std::string where = "perturbations[" + std::to_string(i) + "].";
    int deg = -1;
    if (p.target == "re_omega" || p.target == "im_omega") deg = 2;
    else if (p.target == "omega") deg = 1;
    else if (p.target == "f") deg = 0;
    else throw ConfigError(where + "target: unknown target '" + p.target + "'");
    if (p.side != 1 && p.side != 2) throw ConfigError(where + "side: must be 1 or 2");
    if (p.mode.size() != 5) throw ConfigError(where + "mode: expected 5 entries (x1..x5)");
    if (static_cast<int>(p.primitive.size()) != deg)
      throw ConfigError(where + "primitive: expected " + std::to_string(deg) + " slot indices");
    for (int s : p.primitive)
      if (s < 0 || s > 6) throw ConfigError(where + "primitive: slot out of range");
    if (p.power < 0 || p.power > 4) throw ConfigError(where + "power: must be in 0..4");
    if (!(p.rate > Rational(0))) throw ConfigError(where + "rate: must be positive");
  }
}

/// Glued pieces on the neck torus.
struct GluedPair {
  Rational T, L;
  MatchingPair<Rational> re, im, omega, v;  // per-side inputs (cylinder coordinates)
  ModelForm<Rational> g_re, g_im, g_omega, g_v;
  ModelForm<Rational> phi;      // gamma_T(Re Omega_i + z_i ^ omega_i)
  ModelForm<Rational> phi_hat;  // gamma_T(omega_i^2 / 2 - z_i ^ Im Omega_i)
  double min_eigenvalue = 0.0;  // of g_phi on the positivity grid
  GridSpec positivity_grid;
};

namespace detail {

inline ModelForm<Rational> cyl_constant(const AltForm<Rational>& c) {
  ModelForm<Rational> out(ModelManifold<Rational>::cylinder7(), c.degree());
  out.add_constant(c);
  return out;
}

inline FourierIndex full_index(const std::vector<int>& mode) {
  FourierIndex k(7, 0);
  for (int j = 0; j < 5; ++j) k[static_cast<std::size_t>(j + 1)] = mode[static_cast<std::size_t>(j)];
  return k;
}

}  // namespace detail

/// Flat pieces and the perturbation of each side, then gamma_T of every piece.
inline GluedPair glue_su3_pair(const GluingConfig& c) {
  using Q = Rational;
  validate_config(c);
  const auto cyl = ModelManifold<Q>::cylinder7();
  const auto su3 = standard_su3<Q>();
  const auto re0 = lift_from_v(su3.re), im0 = lift_from_v(su3.im), om0 = lift_from_v(su3.omega);
  AltForm<Q> v0(7, 1);
  for (int j = 0; j < 5; ++j) v0.add(Mask(1) << (j + 1), c.harmonic_v[static_cast<std::size_t>(j)]);

  std::array<ModelForm<Q>, 2> re, im, om, f;
  for (int s = 0; s < 2; ++s) {
    auto side = [&](const AltForm<Q>& a) {
      auto m = detail::cyl_constant(a);
      return s == 0 ? m : reflect_dt(m);
    };
    re[static_cast<std::size_t>(s)] = side(re0);
    im[static_cast<std::size_t>(s)] = side(im0);
    om[static_cast<std::size_t>(s)] = side(om0);
    f[static_cast<std::size_t>(s)] = ModelForm<Q>(cyl, 0);
  }
  for (const auto& p : c.perturbations) {
    const std::size_t s = static_cast<std::size_t>(p.side - 1);
    AltForm<Q> prim = AltForm<Q>::scalar(7, Q(1));
    for (int slot : p.primitive) prim = wedge(prim, AltForm<Q>::monomial(7, {slot}));
    if (prim.is_zero()) throw ConfigError("perturbation primitive repeats a slot");
    auto sigma = capped_mode(cyl, detail::full_index(p.mode), p.cosine, p.power, p.rate, prim * p.amplitude);
    if (p.target == "f") f[s] += sigma;
    else {
      auto d = exterior_d(sigma);
      if (p.target == "re_omega") re[s] += d;
      else if (p.target == "im_omega") im[s] += d;
      else om[s] += d;
    }
  }
  GluedPair g;
  g.T = c.T;
  g.L = c.L;
  AltForm<Q> dth = AltForm<Q>::monomial(7, {0});
  std::array<ModelForm<Q>, 2> z, v, phi, hat;
  for (std::size_t s = 0; s < 2; ++s) {
    v[s] = detail::cyl_constant(v0) + exterior_d(f[s]);
    z[s] = detail::cyl_constant(dth * c.L) + v[s];
    phi[s] = re[s] + wedge(z[s], om[s]);
    hat[s] = wedge(om[s], om[s]) * ratio<Q>(1, 2) - wedge(z[s], im[s]);
  }
  g.re = {re[0], re[1]};
  g.im = {im[0], im[1]};
  g.omega = {om[0], om[1]};
  g.v = {v[0], v[1]};
  try {
    g.g_re = gamma_T(g.re, c.T);
    g.g_im = gamma_T(g.im, c.T);
    g.g_omega = gamma_T(g.omega, c.T);
    g.g_v = gamma_T(g.v, c.T);
    g.phi = gamma_T(MatchingPair<Q>{phi[0], phi[1]}, c.T);
    g.phi_hat = gamma_T(MatchingPair<Q>{hat[0], hat[1]}, c.T);
  } catch (const std::exception& e) {
    throw StageError("glue", e.what());
  }
  // positivity on a sample grid
  g.positivity_grid = solver_grid(g.phi, c.positivity_points, false);
  try {
    g.min_eigenvalue = min_metric_eigenvalue(sample(g.phi, g.positivity_grid));
  } catch (const PositivityError& e) {
    throw StageError("positivity", e.what());
  }
  if (!(g.min_eigenvalue > 0.0)) throw StageError("positivity", "glued 3-form is degenerate");
  return g;
}

/// Pointwise Calabi-Yau data of a circle-invariant G2 field.
struct DecomposedFields {
  GridForm re, im, omega, z;  // on the 7 slots, no circle legs except in z
  double max_su3_residual = 0.0;
  bool all_valid = true;
  double L_variation = 0.0;   // max |L(x) - mean L|
};

inline DecomposedFields decompose_field(const GridForm& phi, double tol = 1e-8) {
  DecomposedFields d;
  d.re = GridForm(phi.spec, 3);
  d.im = GridForm(phi.spec, 3);
  d.omega = GridForm(phi.spec, 2);
  d.z = GridForm(phi.spec, 1);
  for (std::size_t p = 0; p < phi.points(); ++p) {
    auto t = su3_from_g2(phi.at(p), 1, 0, 1e-6);
    auto v = validate_su3(t.s, tol);
    d.max_su3_residual = std::max(d.max_su3_residual, v.max_residual());
    if (!v.passed()) d.all_valid = false;
    d.re.set(p, lift_from_v(t.s.re));
    d.im.set(p, lift_from_v(t.s.im));
    d.omega.set(p, lift_from_v(t.s.omega));
    d.z.set(p, t.z.form());
  }
  const auto& L = d.z.data[0];  // dtheta is the first 1-form monomial
  double mean = 0.0;
  for (double x : L) mean += x;
  mean /= static_cast<double>(L.size());
  for (double x : L) d.L_variation = std::max(d.L_variation, std::abs(x - mean));
  return d;
}

struct GlueReport {
  GluingConfig config;
  GluedPair glued;
  TorsionSolveState solve;
  DecomposedFields fields;
  // classes on the 7 slots
  AltForm<double> phi_class, solved_class;
  AltForm<double> glued_re, glued_omega, glued_v;
  AltForm<double> re_class, im_class, omega_class, z_class, v_class;
  double L_measured = 0.0;
  double s1_defect = 0.0;
  double discretization_dropped = 0.0;  // coexact part removed when sampling phi^T
  GluedClassReport classes;
  double seconds = 0.0;
};

namespace detail {

inline AltForm<double> drop_theta(const AltForm<double>& a, int theta = 0) {
  AltForm<double> out(a.dim(), a.degree());
  for (const auto& [m, c] : a.terms())
    if (!(m >> theta & 1)) out.add(m, c);
  return out;
}

}  // namespace detail

inline GlueReport glue_and_solve(const GluingConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  GlueReport r;
  r.config = c;
  r.glued = glue_su3_pair(c);
  const auto& phi = r.glued.phi;
  r.phi_class = class_vector(phi);
  try {
    auto spec = solver_grid(phi, c.solver.points, false);
    auto base = discretize_closed(phi, spec, &r.discretization_dropped);
    r.solve = remove_torsion(base, c.solver);
  } catch (const std::exception& e) {
    throw StageError("solve", e.what());
  }
  if (!r.solve.report.converged) throw StageError("solve", r.solve.report.message);
  const GridForm tf = r.solve.phi();
  r.s1_defect = s1_defect(tf);
  r.solved_class = zero_mode(tf);
  try {
    r.fields = decompose_field(tf, c.class_tolerance);
  } catch (const std::exception& e) {
    throw StageError("decompose", e.what());
  }
  r.re_class = zero_mode(r.fields.re);
  r.im_class = zero_mode(r.fields.im);
  r.omega_class = zero_mode(r.fields.omega);
  r.z_class = zero_mode(r.fields.z);
  r.v_class = detail::drop_theta(r.z_class);
  r.L_measured = r.z_class.coeff(Mask(1));
  r.glued_re = class_vector(r.glued.g_re);
  r.glued_omega = class_vector(r.glued.g_omega);
  r.glued_v = class_vector(r.glued.g_v);
  GluedClassInputs in;
  in.L = to_double(c.L);
  in.L_measured = r.L_measured;
  in.re = r.re_class;
  in.omega = r.omega_class;
  in.v = r.v_class;
  in.glued_re = r.glued_re;
  in.glued_omega = r.glued_omega;
  in.glued_v = r.glued_v;
  r.classes = glued_class_check(in, c.class_tolerance);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Smallest T in [lo, hi] (to `resolution`) for which glue_and_solve
/// converges with every class relation passing, assuming success is monotone
/// in T. Returns nothing when hi itself fails.
inline std::optional<double> find_T0(GluingConfig c, double lo, double hi, double resolution = 0.25) {
  auto ok = [&](double T) {
    c.T = ratio<Rational>(std::lround(T * 64.0), 64);
    try {
      return glue_and_solve(c).classes.passed();
    } catch (const std::exception&) {
      return false;
    }
  };
  if (!ok(hi)) return std::nullopt;
  if (ok(lo)) return lo;
  while (hi - lo > resolution) {
    double mid = 0.5 * (lo + hi);
    if (ok(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace g2cy
