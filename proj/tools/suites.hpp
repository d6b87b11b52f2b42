#pragma once

// Property suites behind `g2cy verify`. Each trial draws from its own
// generator seeded by trial_seed(seed, trial); per-trial records are merged
// in trial order, so the report does not depend on the number of jobs.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "g2cy/correspondence.hpp"
#include "g2cy/g2.hpp"
#include "g2cy/gluing.hpp"
#include "g2cy/io.hpp"
#include "g2cy/moduli.hpp"
#include "g2cy/pipeline.hpp"
#include "g2cy/random.hpp"
#include "g2cy/su3.hpp"
#include "g2cy/torsion_solver.hpp"

namespace g2cy::cli {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SuiteSpec {
  std::string suite;
  int trials = 20;
  std::uint64_t seed = 1;
  std::string scalar = "rational";
  double tolerance = 1e-10;
  int jobs = 1;
  std::optional<GluingConfig> glue;  // solver suite: end-to-end config, default_glue_config() if unset
};

struct PropertyRecord {
  std::string name, statement;
  int checks = 0, failures = 0;
  double max_residual = 0.0;
  int first_failed_trial = -1;
  std::string first_failure;
};

class Recorder {
 public:
  Recorder(int trial, bool exact, double tol) : trial_(trial), exact_(exact), tol_(tol) {}

  bool exact() const { return exact_; }
  double tol() const { return tol_; }

  void check(const std::string& name, const std::string& statement, bool ok, double residual = 0.0, const std::string& note = "") {
    auto& r = get(name, statement);
    ++r.checks;
    r.max_residual = std::max(r.max_residual, residual);
    if (!ok) {
      if (r.failures++ == 0) {
        r.first_failed_trial = trial_;
        r.first_failure = note.empty() ? "residual " + std::to_string(residual) : note;
      }
    }
  }
  /// Exact equality in rational mode, |difference| <= tol in float mode.
  template <class F>
  void same(const std::string& name, const std::string& statement, const F& a, const F& b) {
    const double res = (a - b).max_abs();
    check(name, statement, exact_ ? a == b : res <= tol_, res);
  }
  void bound(const std::string& name, const std::string& statement, double value, double limit) {
    check(name, statement, value <= limit, value);
  }

  std::vector<PropertyRecord>& records() { return order_; }

 private:
  PropertyRecord& get(const std::string& name, const std::string& statement) {
    for (auto& r : order_)
      if (r.name == name) return r;
    order_.push_back({name, statement});
    return order_.back();
  }
  int trial_;
  bool exact_;
  double tol_;
  std::vector<PropertyRecord> order_;
};

namespace detail {

template <class S>
AltForm<S> mono(std::vector<int> idx) {
  return AltForm<S>::monomial(7, idx);
}

template <class S>
CorrespondenceTriple<S> random_triple(Rng& rng) {
  auto s = pullback_su3(random_gl_plus_bounded<S>(rng, 6, 20.0), standard_su3<S>());
  AltForm<S> z(7, 1);
  for (int j = 1; j < 7; ++j)
    if (rng() % 3) z.add(Mask(1) << j, random_scalar<S>(rng));
  S c;
  do c = random_scalar<S>(rng, 2.0);
  while (std::abs(to_double(c)) < 0.2);
  z.add(Mask(1), c);
  return {Twisting<S>(z), s};
}

// Random real form on the torus with modes in two directions.
template <class S>
ModelForm<S> random_torus_form(Rng& rng, const ModelManifold<S>& m, int degree, int terms) {
  ModelForm<S> out(m, degree);
  for (int i = 0; i < terms; ++i) {
    FourierIndex k(7, 0);
    k[1] = static_cast<int>(rng() % 3) - 1;
    k[2] = static_cast<int>(rng() % 3);
    auto c = random_form<S>(rng, 7, degree, 1.0, 0.3);
    if (rng() % 2) out.add_cos(k, unit_profile<S>(), c);
    else out.add_sin(k, unit_profile<S>(), c);
  }
  return out;
}

// Closed decaying perturbation of a constant form on the cylinder.
template <class S>
ModelForm<S> random_cylinder_exact(Rng& rng, int degree, int count) {
  const auto cyl = ModelManifold<S>::cylinder7();
  ModelForm<S> out(cyl, degree);
  for (int i = 0; i < count; ++i) {
    FourierIndex k(7, 0);
    k[static_cast<std::size_t>(1 + rng() % 5)] = 1 + static_cast<int>(rng() % 2);
    auto prim = random_form<S>(rng, 7, degree - 1, 0.5, 0.3);
    out += exterior_d(capped_mode(cyl, k, rng() % 2 == 0, static_cast<int>(rng() % 2), S(1 + static_cast<int>(rng() % 2)), prim));
  }
  return out;
}

template <class S>
MatchingPair<S> random_matching_pair(Rng& rng, int degree) {
  ModelForm<S> lim(ModelManifold<S>::cylinder7(), degree);
  lim.add_constant(random_form<S>(rng, 7, degree, 1.0, 0.4));
  return {lim + random_cylinder_exact<S>(rng, degree, 2), reflect_dt(lim) + random_cylinder_exact<S>(rng, degree, 2)};
}

}  // namespace detail

template <class S>
void pointwise_trial(Recorder& rec, Rng& rng) {
  auto A = random_gl_plus<S>(rng, 7, 0.3);
  const auto phi0 = standard_phi_form<S>();
  auto phi = pullback_linear(A, phi0);
  G2Structure<S> s(phi);
  rec.same("g2.metric_naturality", "g_{A*phi0} = A^T A", s.metric().matrix(), A.transpose() * A);
  rec.same("g2.volume_naturality", "vol_{A*phi0} = A*vol0", s.volume(), pullback_linear(A, detail::mono<S>({0, 1, 2, 3, 4, 5, 6})));
  rec.same("g2.dual_naturality", "*_{A*phi0}(A*phi0) = A*(*phi0)", s.dual(), pullback_linear(A, hodge_dual_g2(phi0)));
  const S n = s.inner(phi, phi);
  rec.check("g2.norm", "|phi|^2 = 7", rec.exact() ? n == S(7) : std::abs(to_double(n) - 7.0) <= rec.tol(), std::abs(to_double(n) - 7.0));
  TwoFormSplitting<S> sp(s);
  auto beta = random_form<S>(rng, 7, 2);
  auto [b7, b14] = sp.split(beta);
  rec.same("split2.sum", "beta = beta_7 + beta_14", b7 + b14, beta);
  rec.same("split2.idempotent", "pi_7 beta_7 = beta_7", sp.project7(b7), b7);
  rec.same("split2.kernel", "pi_7 beta_14 = 0", sp.project7(b14), AltForm<S>(7, 2));
  const S ip = s.inner(b7, b14);
  rec.check("split2.orthogonal", "<beta_7, beta_14> = 0", rec.exact() ? is_zero(ip) : std::abs(to_double(ip)) <= rec.tol(),
            std::abs(to_double(ip)));
  auto P = sp.projector_matrix();
  rec.same("split2.projector", "P_7^2 = P_7", P * P, P);
  auto su = pullback_su3(random_gl_plus<S>(rng, 6), standard_su3<S>());
  auto v = validate_su3(su, rec.tol());
  rec.check("su3.validate", "GL+(6) pullbacks of the standard structure are SU(3) structures", v.passed(), v.max_residual(), v.summary());
  rec.same("su3.hitchin_dual", "J(Re Omega) = Im Omega", hitchin_dual(su.re).first, su.im);
}

template <class S>
void correspondence_trial(Recorder& rec, Rng& rng) {
  auto t = detail::random_triple<S>(rng);
  auto g = g2_from_su3(t);
  auto back = su3_from_g2(g, t.z.orientation());
  rec.same("roundtrip.z", "su3_from_g2(g2_from_su3(z, Omega, omega)) recovers z", back.z.form(), t.z.form());
  rec.same("roundtrip.re_omega", "... recovers Re Omega", back.s.re, t.s.re);
  rec.same("roundtrip.im_omega", "... recovers Im Omega", back.s.im, t.s.im);
  rec.same("roundtrip.omega", "... recovers omega", back.s.omega, t.s.omega);
  rec.same("product_metric", "g_phi = z (x) z + g_{Omega,omega}", g.metric().matrix(), product_metric(t).matrix());
  const auto im = lift_from_v(t.s.im), om = lift_from_v(t.s.omega);
  rec.same("dual_identity", "*phi = omega^2/2 - z ^ Im Omega", g.dual(), wedge(om, om) * ratio<S>(1, 2) - wedge(t.z.form(), im));
  if constexpr (is_exact_v<S>) {
    auto all = enumerate_triples(g);
    const bool ok = all.size() == 2 && ((all[0] == t && all[1] == sign_twin(t)) || (all[1] == t && all[0] == sign_twin(t)));
    rec.check("two_triples", "the triples inducing phi are exactly (z, Omega, omega) and (-z, conj Omega, -omega)", ok, 0.0,
              std::to_string(all.size()) + " triples");
  }
  auto tw = sign_twin(t);
  rec.same("sign_twin.same_phi", "(-z, conj Omega, -omega) induces the same phi", assemble_phi(tw.z, tw.s), g.phi());
}

template <class S>
void spectral_trial(Recorder& rec, Rng& rng) {
  const auto torus = ModelManifold<S>::torus(7, 0);
  auto a = detail::random_torus_form<S>(rng, torus, 1 + static_cast<int>(rng() % 3), 3);
  auto b = detail::random_torus_form<S>(rng, torus, 1 + static_cast<int>(rng() % 2), 3);
  const auto zero = [](const ModelForm<S>& x) { return x.max_abs(); };
  auto dd = exterior_d(exterior_d(a));
  rec.check("d_squared", "d d a = 0", rec.exact() ? dd.is_zero() : zero(dd) <= rec.tol(), zero(dd));
  const S sign = a.degree() % 2 ? S(-1) : S(1);
  auto leib = exterior_d(wedge(a, b)) - wedge(exterior_d(a), b) - wedge(a, exterior_d(b)) * sign;
  rec.check("leibniz", "d(a ^ b) = da ^ b + (-1)^p a ^ db", rec.exact() ? leib.is_zero() : zero(leib) <= rec.tol(), zero(leib));
  rec.bound("exact_has_no_class", "harmonic part of d sigma = 0", class_vector(exterior_d(a)).max_abs(), rec.exact() ? 0.0 : rec.tol());
  auto h = harmonic_project(a);
  rec.check("harmonic_idempotent", "H H a = H a", harmonic_project(h) == h);
  auto cyl = detail::random_cylinder_exact<S>(rng, 2, 2);
  auto dc = exterior_d(cyl);
  rec.check("cylinder_closed", "d of an exact decaying form on the cylinder vanishes", dc.is_zero() || (!rec.exact() && zero(dc) <= rec.tol()), zero(dc));
  if constexpr (std::is_same_v<S, double>) {
    GridSpec spec;
    spec.n = {1, 8, 8, 1, 1, 1, 1};
    spec.length.fill(2 * std::numbers::pi);
    const double res = (grid_d(sample(a, spec)) - sample(exterior_d(a), spec)).max_abs();
    rec.bound("grid_d", "spectral d on the grid = sampled d of the model form", res, 1e-11 * (1.0 + a.max_abs()));
  }
}

inline void gluing_trial(Recorder& rec, Rng& rng) {
  using Q = Rational;
  const Q T(5 + static_cast<int>(rng() % 3));
  const int deg = 1 + static_cast<int>(rng() % 3);
  auto p = detail::random_matching_pair<Q>(rng, deg);
  auto full = gamma_T_full(p, T);
  rec.check("gamma.closed", "d gamma_T(a1, a2) = 0", exterior_d(full.neck).is_zero());
  rec.check("gamma.support", "a' - a is supported in [T-2, T-1]", full.side1.support_ok && full.side2.support_ok);
  auto q = detail::random_matching_pair<Q>(rng, deg);
  rec.check("gamma.linear", "gamma_T is linear", gamma_T(MatchingPair<Q>{p.first + q.first, p.second + q.second}, T) == gamma_T(p, T) + gamma_T(q, T));
  auto pb = detail::random_matching_pair<Q>(rng, 2);
  auto w = wedge_defect_primitive(p, pb, T);
  rec.check("wedge.exact", "gamma_T(a ^ b) - gamma_T(a) ^ gamma_T(b) = d(primitive)", w.exact);
  rec.check("wedge.support", "the primitive is supported in the ramps", w.support_ok);
  rec.bound("wedge.harmonic", "harmonic part of the wedge defect = 0", w.harmonic.max_abs(), 1e-10);
}

template <class S>
void moduli_trial(Recorder& rec, Rng& rng) {
  auto a = random_form<S>(rng, 7, 3);
  auto [x, y] = kunneth3(a);
  rec.check("kunneth.roundtrip", "H^3(M x S^1) = H^3(M) + H^2(M) round trip", reassemble3(x, y) == a);
  const auto torus = ModelManifold<S>::torus(7, 0);
  S L;
  do L = random_scalar<S>(rng, 3.0);
  while (!(to_double(L) > 0.1));
  AltForm<S> h(7, 1);
  for (int j = 1; j < 7; ++j) h.add(Mask(1) << j, random_scalar<S>(rng, 0.5));
  ModelForm<S> z(torus, 1);
  z.add_constant(detail::mono<S>({0}) * L + h);
  auto f = detail::random_torus_form<S>(rng, torus, 0, 2);
  auto tc = twisting_class(z + exterior_d(f));
  rec.check("twisting.L", "(L, [v]) of L dtheta + h + df has the given L", rec.exact() ? tc.L == L : std::abs(to_double(tc.L - L)) <= rec.tol(),
            std::abs(to_double(tc.L - L)));
  rec.bound("twisting.v", "... and [v] = h", (tc.v - h.template map<double>([](const S& v) { return to_double(v); })).max_abs(), rec.exact() ? 0.0 : rec.tol());
  auto su = pullback_su3(random_gl_plus<S>(rng, 6, 0.3), standard_su3<S>());
  ModelForm<S> re(torus, 3), om(torus, 2);
  re.add_constant(lift_from_v(su.re));
  om.add_constant(lift_from_v(su.omega));
  auto base = su3_coordinates(re, om);
  auto moved = su3_coordinates(re + exterior_d(detail::random_torus_form<S>(rng, torus, 2, 2)), om + exterior_d(detail::random_torus_form<S>(rng, torus, 1, 2)));
  rec.bound("coordinates.exact_invariance", "([Re Omega], [omega]) ignore exact changes",
            std::max((moved.first - base.first).max_abs(), (moved.second - base.second).max_abs()), rec.exact() ? 0.0 : rec.tol());
  const long b1 = static_cast<long>(rng() % 7), b2 = static_cast<long>(rng() % 30), b3 = static_cast<long>(rng() % 60);
  rec.check("dimension", "dim M_SU(3) = b3 + b2 - b1 - 1 = b3(M x S^1) - b1 - 1", msu3_dimension(b1, b2, b3) == product_b3(b2, b3) - b1 - 1);
  rec.check("dimension.torus", "dim M_SU(3)(T^6) = 28", msu3_dimension(6, 15, 20) == 28);
}

// Torus problem phi_std + d sigma with a two-mode 2-form sigma.
inline void solver_trial(Recorder& rec, Rng& rng) {
  const auto torus = ModelManifold<double>::torus(7, 0);
  ModelForm<double> sig(torus, 2);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  for (int i = 0; i < 2; ++i) {
    FourierIndex k(7, 0);
    k[static_cast<std::size_t>(1 + i)] = 1;
    AltForm<double> c(7, 2);
    for (Mask m : masks_of_degree(7, 2))
      if (!(m & 1) && rng() % 4 == 0) c.add(m, u(rng));
    sig.add_cos(k, unit_profile<double>(), c);
  }
  ModelForm<double> phi(torus, 3);
  phi.add_constant(standard_phi_form<double>());
  phi += exterior_d(sig);
  auto spec = solver_grid(phi, 8, false);
  auto base = discretize_closed(phi, spec);
  auto st = remove_torsion(base, SolveOptions{});
  rec.check("solve.converged", "Newton converges on small exact perturbations", st.report.converged, st.report.residual, st.report.message);
  rec.bound("solve.torsion", "|d *phi| <= 1e-8 after the solve", st.report.torsion, 1e-8);
  rec.bound("solve.class", "[phi] is preserved to 1e-12", st.report.class_change, 1e-12);
  // derivative of F against central differences
  std::normal_distribution<double> n(0.0, 1.0);
  GridForm v(spec, 3);
  for (auto& comp : v.data)
    for (auto& x : comp) x = n(rng);
  v = grid_exact_part(drop_nyquist(v)) * 0.3;
  auto DF = grid_exact_part(flat_star(pointwise_dual_derivative(base, v)));
  double prev = 0.0, worst = 1e9;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    auto fd = (hitchin_map_F(base + v * h) - hitchin_map_F(base - v * h)) * (0.5 / h);
    double err = (fd - DF).rms();
    if (prev > 0.0) worst = std::min(worst, std::log2(prev / err));
    prev = err;
  }
  rec.check("derivative.order", "DF matches central differences with order >= 1.9", worst >= 1.9, worst);
}

/// Same document as configs/perturbed.json.
inline GluingConfig default_glue_config() {
  static const char* text = R"json(
{
  "schema": "g2cy.glue-config/1",
  "T": 5,
  "twisting": { "L": 1, "v": [0, 0, 0, 0, 0] },
  "perturbations": [
    { "target": "re_omega", "side": 1, "mode": [1, 0, 0, 0, 0], "trig": "cos", "power": 0, "rate": 1, "amplitude": "1/50", "primitive": ["x2", "x3"] },
    { "target": "im_omega", "side": 1, "mode": [0, 1, 0, 0, 0], "trig": "sin", "power": 1, "rate": 1, "amplitude": "1/50", "primitive": ["x1", "x4"] },
    { "target": "omega", "side": 2, "mode": [1, 0, 0, 0, 0], "trig": "cos", "power": 0, "rate": 1, "amplitude": "1/50", "primitive": ["x5"] },
    { "target": "omega", "side": 1, "mode": [0, 1, 0, 0, 0], "trig": "cos", "power": 1, "rate": 2, "amplitude": "1/50", "primitive": ["x3"] }
  ],
  "solver": { "points": 8, "tolerance": 1e-10, "max_iterations": 20 },
  "positivity_points": 9,
  "class_tolerance": 1e-8
}
)json";
  return parse_config(std::string(text));
}

struct SuiteResult {
  SuiteSpec spec;
  std::vector<PropertyRecord> properties;
  std::vector<std::string> artifacts;
  std::string residual_csv;  // solver suite
  bool passed() const {
    for (const auto& p : properties)
      if (p.failures) return false;
    return !properties.empty();
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> n{"pointwise", "correspondence", "spectral", "gluing", "solver", "moduli"};
  return n;
}

inline SuiteResult run_suite(const SuiteSpec& s) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), s.suite) == names.end()) throw UsageError("unknown suite '" + s.suite + "'");
  if (s.trials < 1) throw UsageError("--trials must be at least 1");
  if (s.jobs < 1) throw UsageError("--jobs must be at least 1");
  if (s.scalar != "rational" && s.scalar != "float") throw UsageError("--scalar must be rational or float");
  const bool exact = s.scalar == "rational";
  if (s.suite == "gluing" && !exact) throw UsageError("the gluing suite runs in rational arithmetic only");
  if (s.suite == "solver" && exact) throw UsageError("the solver suite runs in float arithmetic only");

  std::function<void(Recorder&, Rng&)> trial;
  if (s.suite == "pointwise") trial = exact ? pointwise_trial<Rational> : pointwise_trial<double>;
  else if (s.suite == "correspondence") trial = exact ? correspondence_trial<Rational> : correspondence_trial<double>;
  else if (s.suite == "spectral") trial = exact ? spectral_trial<Rational> : spectral_trial<double>;
  else if (s.suite == "gluing") trial = gluing_trial;
  else if (s.suite == "moduli") trial = exact ? moduli_trial<Rational> : moduli_trial<double>;
  else trial = solver_trial;

  std::vector<Recorder> recs;
  for (int t = 0; t < s.trials; ++t) recs.emplace_back(t, exact, s.tolerance);
  auto run = [&](int t) {
    Rng rng(trial_seed(s.seed, static_cast<std::uint64_t>(t)));
    auto& rec = recs[static_cast<std::size_t>(t)];
    try {
      trial(rec, rng);
    } catch (const std::exception& e) {
      rec.check("trial.completed", "the trial ran without an exception", false, 0.0, e.what());
    }
  };
  if (s.jobs == 1) {
    for (int t = 0; t < s.trials; ++t) run(t);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int j = 0; j < s.jobs; ++j)
      pool.emplace_back([&] {
        for (int t; (t = next++) < s.trials;) run(t);
      });
    for (auto& th : pool) th.join();
  }

  SuiteResult out;
  out.spec = s;
  auto merge = [&](const PropertyRecord& r) {
    auto it = std::find_if(out.properties.begin(), out.properties.end(), [&](const auto& p) { return p.name == r.name; });
    if (it == out.properties.end()) {
      out.properties.push_back(r);
      return;
    }
    it->checks += r.checks;
    it->max_residual = std::max(it->max_residual, r.max_residual);
    if (r.failures && !it->failures) {
      it->first_failed_trial = r.first_failed_trial;
      it->first_failure = r.first_failure;
    }
    it->failures += r.failures;
  };
  for (auto& rec : recs)
    for (const auto& r : rec.records()) merge(r);

  if (s.suite == "solver") {
    // end-to-end glue-and-solve on the given (or default) configuration
    Recorder rec(-1, false, s.tolerance);
    try {
      auto report = glue_and_solve(s.glue ? *s.glue : default_glue_config());
      rec.check("glue.converged", "glue-and-solve converges", report.solve.report.converged, report.solve.report.residual);
      rec.check("glue.classes", "class relations of the solved structure hold", report.classes.passed());
      out.residual_csv = report.solve.report.history_csv();
    } catch (const std::exception& e) {
      rec.check("glue.converged", "glue-and-solve converges", false, 0.0, e.what());
    }
    for (const auto& r : rec.records()) merge(r);
  }
  return out;
}

inline Json suite_json(const SuiteResult& r) {
  Json j;
  j["schema"] = "g2cy.verify-report/1";
  j["suite"] = r.spec.suite;
  j["scalar"] = r.spec.scalar;
  j["seed"] = r.spec.seed;
  j["trials"] = r.spec.trials;
  j["tolerance"] = r.spec.tolerance;
  j["passed"] = r.passed();
  Json props = Json::array();
  for (const auto& p : r.properties) {
    Json x = {{"name", p.name}, {"statement", p.statement}, {"checks", p.checks}, {"failures", p.failures}, {"max_residual", p.max_residual}};
    if (p.failures) x["first_failure"] = {{"trial", p.first_failed_trial}, {"detail", p.first_failure}};
    props.push_back(x);
  }
  j["properties"] = props;
  if (!r.artifacts.empty()) j["artifacts"] = r.artifacts;
  return j;
}

}  // namespace g2cy::cli
