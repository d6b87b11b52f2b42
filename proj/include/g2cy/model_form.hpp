#pragma once

// Differential forms on flat model manifolds in spectral form: a finite sum
// of terms c * e^{i nu.x} * p(s) * e^I, where x runs over the periodic
// coordinates, p is a Profile in the distinguished end coordinate and e^I a
// constant coframe monomial.
//
// Periodic coordinate j has period 2 pi L_j, so Fourier index k gives the
// frequency nu_j = k_j / L_j; with rational L_j every frequency is exact.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "g2cy/alt_form.hpp"
#include "g2cy/profile.hpp"

namespace g2cy {

class ModelFormError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ManifoldKind { torus, cylinder, neck };

inline std::string kind_name(ManifoldKind k) {
  switch (k) {
    case ManifoldKind::torus: return "torus";
    case ManifoldKind::cylinder: return "cylinder";
    case ManifoldKind::neck: return "neck";
  }
  return "?";
}

/// Coordinates, their periods and the two distinguished slots.
template <class S>
struct ModelManifold {
  ManifoldKind kind = ManifoldKind::torus;
  std::vector<std::string> labels;
  std::vector<S> scales;  // period / 2 pi for periodic coordinates
  int theta = -1;         // circle factor, -1 if absent
  int t = -1;             // end (cylinder) or neck coordinate, -1 on plain tori
  S neck_length{0};       // circumference of the neck coordinate

  int dim() const { return static_cast<int>(labels.size()); }
  bool periodic(int j) const { return j != t; }
  S period_over_2pi(int j) const { return scales[static_cast<std::size_t>(j)]; }

  /// T^n with all periods 2 pi; optional circle slot.
  static ModelManifold torus(int n, int theta = -1) {
    ModelManifold m;
    m.kind = ManifoldKind::torus;
    for (int i = 0; i < n; ++i) m.labels.push_back("x" + std::to_string(i));
    if (theta >= 0) m.labels[static_cast<std::size_t>(theta)] = "theta";
    m.scales.assign(static_cast<std::size_t>(n), S(1));
    m.theta = theta;
    return m;
  }
  /// [theta, x1..x5, t] with t the end coordinate.
  static ModelManifold cylinder7() {
    ModelManifold m;
    m.kind = ManifoldKind::cylinder;
    m.labels = {"theta", "x1", "x2", "x3", "x4", "x5", "t"};
    m.scales.assign(7, S(1));
    m.theta = 0;
    m.t = 6;
    return m;
  }
  /// [theta, x1..x5, s] with s on a circle of circumference 2T.
  static ModelManifold neck7(const S& T) {
    ModelManifold m = cylinder7();
    m.kind = ManifoldKind::neck;
    m.labels[6] = "s";
    m.neck_length = S(S(2) * T);
    return m;
  }

  friend bool operator==(const ModelManifold& a, const ModelManifold& b) {
    return a.kind == b.kind && a.labels == b.labels && a.scales == b.scales && a.theta == b.theta && a.t == b.t &&
           a.neck_length == b.neck_length;
  }
};

using FourierIndex = std::vector<int>;

template <class S>
struct TermKey {
  FourierIndex k;
  Profile<S> profile;

  friend bool operator<(const TermKey& a, const TermKey& b) {
    if (a.k != b.k) return a.k < b.k;
    return a.profile < b.profile;
  }
  friend bool operator==(const TermKey& a, const TermKey& b) { return a.k == b.k && a.profile == b.profile; }
};

template <class S>
class ModelForm {
 public:
  using C = Complex<S>;
  using Coeff = AltForm<C>;
  using Terms = std::map<TermKey<S>, Coeff>;

  ModelForm() = default;
  ModelForm(ModelManifold<S> m, int degree) : m_(std::move(m)), degree_(degree) {
    if (degree < 0 || degree > m_.dim()) throw DimensionError("model form degree out of range");
  }

  const ModelManifold<S>& manifold() const { return m_; }
  int dim() const { return m_.dim(); }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  const std::optional<S>& decay_rate() const { return decay_; }
  void set_decay_rate(std::optional<S> d) { decay_ = std::move(d); }

  /// Accumulates c * e^{i k.x} * p; drops terms that vanish.
  void add(const FourierIndex& k, const Profile<S>& p, const Coeff& c) {
    check_index(k);
    if (c.degree() != degree_ || c.dim() != dim()) throw DimensionError("model form term shape mismatch");
    if (c.is_zero()) return;
    auto sp = simplify(p);
    if (!sp) return;
    TermKey<S> key{k, *sp};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(std::move(key), c);
      return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  /// Adds the real form Re(c e^{i k.x}) * p for a real coefficient form.
  void add_cos(const FourierIndex& k, const Profile<S>& p, const AltForm<S>& c) {
    if (is_zero_index(k)) {
      add(k, p, c.template map<C>([](const S& v) { return C(v); }));
      return;
    }
    auto half = c.template map<C>([](const S& v) { return C(S(v / S(2))); });
    add(k, p, half);
    add(negate(k), p, half);
  }
  /// Adds Re(-i c e^{i k.x}) * p = c sin(k.x) p.
  void add_sin(const FourierIndex& k, const Profile<S>& p, const AltForm<S>& c) {
    if (is_zero_index(k)) return;
    add(k, p, c.template map<C>([](const S& v) { return C(S(0), S(-v / S(2))); }));
    add(negate(k), p, c.template map<C>([](const S& v) { return C(S(0), S(v / S(2))); }));
  }
  /// Constant real form.
  void add_constant(const AltForm<S>& c) { add_cos(zero_index(), unit_profile<S>(), c); }

  FourierIndex zero_index() const { return FourierIndex(static_cast<std::size_t>(dim()), 0); }
  static bool is_zero_index(const FourierIndex& k) {
    for (int v : k)
      if (v) return false;
    return true;
  }
  static FourierIndex negate(FourierIndex k) {
    for (int& v : k) v = -v;
    return k;
  }

  /// Frequency nu_j = k_j / L_j.
  S frequency(const FourierIndex& k, int j) const {
    return S(S(k[static_cast<std::size_t>(j)]) / m_.period_over_2pi(j));
  }

  ModelForm& operator+=(const ModelForm& o) {
    check_compatible(o);
    for (const auto& [key, c] : o.terms_) add(key.k, key.profile, c);
    return *this;
  }
  ModelForm& operator-=(const ModelForm& o) {
    check_compatible(o);
    for (const auto& [key, c] : o.terms_) add(key.k, key.profile, -c);
    return *this;
  }
  friend ModelForm operator+(ModelForm a, const ModelForm& b) { return a += b; }
  friend ModelForm operator-(ModelForm a, const ModelForm& b) { return a -= b; }
  friend ModelForm operator-(const ModelForm& a) {
    ModelForm out(a.m_, a.degree_);
    out.decay_ = a.decay_;
    for (const auto& [key, c] : a.terms_) out.terms_.emplace(key, -c);
    return out;
  }
  friend ModelForm operator*(const ModelForm& a, const S& s) {
    ModelForm out(a.m_, a.degree_);
    out.decay_ = a.decay_;
    if (g2cy::is_zero(s)) return out;
    for (const auto& [key, c] : a.terms_) out.terms_.emplace(key, c * C(s));
    return out;
  }
  friend bool operator==(const ModelForm& a, const ModelForm& b) {
    return a.m_ == b.m_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

  /// Largest |coefficient| over all terms.
  double max_abs() const {
    double best = 0.0;
    for (const auto& [key, c] : terms_)
      for (const auto& [mask, v] : c.terms()) best = std::max(best, std::hypot(to_double(v.re), to_double(v.im)));
    return best;
  }

  /// Coefficients at -k are the conjugates of those at k.
  bool is_real() const {
    for (const auto& [key, c] : terms_) {
      auto it = terms_.find(TermKey<S>{negate(key.k), key.profile});
      if (it == terms_.end()) return false;
      if (!(it->second == c.template map<C>([](const C& v) { return g2cy::conj(v); }))) return false;
    }
    return true;
  }

  void check_compatible(const ModelForm& o) const {
    if (!(m_ == o.m_)) throw ModelFormError("model forms live on different manifolds");
    if (degree_ != o.degree_) throw DimensionError("model form degree mismatch");
  }

 private:
  void check_index(const FourierIndex& k) const {
    if (static_cast<int>(k.size()) != dim()) throw DimensionError("Fourier index has wrong length");
    if (m_.t >= 0 && k[static_cast<std::size_t>(m_.t)] != 0) throw ModelFormError("no Fourier modes along the end coordinate");
  }

  ModelManifold<S> m_;
  int degree_ = 0;
  Terms terms_;
  std::optional<S> decay_;
};

/// Exterior derivative, exact within the profile family.
template <class S>
ModelForm<S> exterior_d(const ModelForm<S>& a) {
  using C = Complex<S>;
  const auto& m = a.manifold();
  const int n = a.dim();
  if (a.degree() == n) return ModelForm<S>(m, n);  // nothing above top degree
  ModelForm<S> out(m, a.degree() + 1);
  out.set_decay_rate(a.decay_rate());
  for (const auto& [key, c] : a.terms()) {
    for (int j = 0; j < n; ++j) {
      if (!m.periodic(j) || key.k[static_cast<std::size_t>(j)] == 0) continue;
      AltForm<C> dx = AltForm<C>::monomial(n, {j});
      out.add(key.k, key.profile, wedge(dx, c) * C(S(0), a.frequency(key.k, j)));
    }
    if (m.t >= 0) {
      AltForm<C> ds = AltForm<C>::monomial(n, {m.t});
      AltForm<C> w = wedge(ds, c);
      if (w.is_zero()) continue;
      for (const auto& [coef, q] : derivative(key.profile)) out.add(key.k, q, w * C(coef));
    }
  }
  return out;
}

/// Wedge product; Fourier indices add and profiles multiply.
template <class S>
ModelForm<S> wedge(const ModelForm<S>& a, const ModelForm<S>& b) {
  if (!(a.manifold() == b.manifold())) throw ModelFormError("wedge of model forms on different manifolds");
  const int deg = a.degree() + b.degree();
  if (deg > a.dim()) return ModelForm<S>(a.manifold(), a.dim());
  ModelForm<S> out(a.manifold(), deg);
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      auto p = multiply(ka.profile, kb.profile);
      if (!p) continue;
      auto w = wedge(ca, cb);
      if (w.is_zero()) continue;
      FourierIndex k = ka.k;
      for (std::size_t i = 0; i < k.size(); ++i) k[i] += kb.k[i];
      out.add(k, *p, w);
    }
  return out;
}

/// Wedge with a constant form.
template <class S>
ModelForm<S> wedge(const AltForm<S>& c, const ModelForm<S>& b) {
  ModelForm<S> lift(b.manifold(), c.degree());
  lift.add_constant(c);
  return wedge(lift, b);
}

/// Multiplies every term by a profile.
template <class S>
ModelForm<S> multiply_profile(const ModelForm<S>& a, const Profile<S>& p, const S& scale = S(1)) {
  ModelForm<S> out(a.manifold(), a.degree());
  for (const auto& [key, c] : a.terms()) {
    auto q = multiply(key.profile, p);
    if (q) out.add(key.k, *q, c * Complex<S>(scale));
  }
  return out;
}

/// Same form, with every profile domain cut down to `domain` (in s).
template <class S>
ModelForm<S> restrict_domain(const ModelForm<S>& a, const Interval<S>& domain) {
  ModelForm<S> out(a.manifold(), a.degree());
  out.set_decay_rate(a.decay_rate());
  for (const auto& [key, c] : a.terms()) {
    Profile<S> p = key.profile;
    p.chart.domain = p.chart.domain.intersect(domain);
    if (p.chart.domain.thin()) continue;
    out.add(key.k, p, c);
  }
  return out;
}

/// Splits a into dt ^ a_t + a_rest, with a_t, a_rest free of dt.
template <class S>
std::pair<ModelForm<S>, ModelForm<S>> split_dt(const ModelForm<S>& a) {
  const int t = a.manifold().t;
  if (t < 0) throw ModelFormError("manifold has no end coordinate");
  const Mask bit = Mask(1) << t;
  ModelForm<S> at(a.manifold(), std::max(a.degree() - 1, 0)), rest(a.manifold(), a.degree());
  for (const auto& [key, c] : a.terms()) {
    AltForm<Complex<S>> with(a.dim(), a.degree()), without(a.dim(), a.degree());
    for (const auto& [mask, v] : c.terms()) (mask & bit ? with : without).add(mask, v);
    if (!with.is_zero()) at.add(key.k, key.profile, interior_basis(t, with));
    if (!without.is_zero()) rest.add(key.k, key.profile, without);
  }
  return {at, rest};
}

/// t -> infinity limit on a cylinder: constant profiles survive, step factors
/// tend to 1 and their derivatives to 0. Throws on growing terms.
template <class S>
ModelForm<S> asymptotic_limit(const ModelForm<S>& a) {
  if (a.manifold().kind != ManifoldKind::cylinder) throw ModelFormError("asymptotic_limit needs a cylinder");
  ModelForm<S> out(a.manifold(), a.degree());
  for (const auto& [key, c] : a.terms()) {
    const auto& p = key.profile;
    if (p.chart.domain.hi) continue;  // compactly supported in t
    if (p.mu > S(0)) continue;
    if (p.mu < S(0) || p.m > 0) throw ModelFormError("profile does not converge as t -> infinity");
    bool vanishes = false;
    for (const auto& f : p.factors) vanishes = vanishes || f.order > 0;
    if (vanishes) continue;
    out.add(key.k, unit_profile<S>(), c);
  }
  return out;
}

/// Primitive of a closed decaying form on a cylinder end: for a = dt ^ a_t +
/// b, eta = -int_t^infty a_t. Profiles must be pure t^m e^{-mu t} with mu > 0
/// (cutoff factors are allowed only when they are identically 1 on the domain).
template <class S>
ModelForm<S> exact_primitive_on_end(const ModelForm<S>& a) {
  const auto& man = a.manifold();
  if (man.kind != ManifoldKind::cylinder) throw ModelFormError("exact_primitive_on_end needs a cylinder");
  if (a.degree() == 0) throw ModelFormError("functions have no primitive");
  if (!exterior_d(a).is_zero()) throw ModelFormError("exact_primitive_on_end: input is not closed");
  ModelForm<S> eta(man, a.degree() - 1);
  auto [at, rest] = split_dt(a);
  for (const auto& [key, c] : a.terms()) {
    const auto& p = key.profile;
    if (!(p.mu > S(0))) throw ModelFormError("exact_primitive_on_end: input does not decay");
    if (!p.factors.empty()) throw ModelFormError("exact_primitive_on_end: cutoff factor inside the domain");
    if (p.chart.dir != 1 || p.chart.shift != S(0)) throw ModelFormError("exact_primitive_on_end: profile not in the end chart");
  }
  for (const auto& [key, c] : at.terms()) {
    const auto& p = key.profile;
    auto coef = tail_integral_coefficients(p.m, p.mu);
    for (int j = 0; j <= p.m; ++j) {
      Profile<S> q = p;
      q.m = j;
      eta.add(key.k, q, c * Complex<S>(S(-coef[static_cast<std::size_t>(j)])));
    }
  }
  eta.set_decay_rate(a.decay_rate());
  return eta;
}

/// Cylinder C^k_delta norm of (1 - psi) a + psi e^{delta t} (a - a~), psi the
/// unit step on [0, 1]. Each D^j is bounded mode by mode: the j-th derivative
/// of c e^{i nu.x} p(t) contributes sum_{i+l=j} C(j,i) |nu|^i |c p^{(l)}(t)|,
/// summed over Fourier modes and maximised over a t grid on [0, t_max].
template <class S>
double weighted_norm(const ModelForm<S>& a, double delta, int k, double t_max = 60.0, int samples = 2400) {
  const auto& man = a.manifold();
  if (man.kind != ManifoldKind::cylinder && man.kind != ManifoldKind::torus)
    throw ModelFormError("weighted_norm needs a cylinder or a torus");
  if (k < 0) throw std::invalid_argument("derivative order must be nonnegative");
  // profiles carried as (coef, profile) in double for evaluation
  struct Piece {
    std::vector<std::pair<double, Profile<double>>> prof;
    std::vector<std::pair<Mask, std::complex<double>>> coeff;
  };
  auto to_d = [](const Profile<S>& p) {
    Profile<double> q;
    q.chart.dir = p.chart.dir;
    q.chart.shift = to_double(p.chart.shift);
    if (p.chart.domain.lo) q.chart.domain.lo = to_double(*p.chart.domain.lo);
    if (p.chart.domain.hi) q.chart.domain.hi = to_double(*p.chart.domain.hi);
    q.m = p.m;
    q.mu = to_double(p.mu);
    for (const auto& f : p.factors) q.factors.push_back({to_double(f.a), f.order});
    return q;
  };
  std::map<FourierIndex, std::vector<Piece>> groups;
  Profile<double> step;
  step.factors.push_back({0.0, 0});
  for (const auto& [key, c] : a.terms()) {
    Piece piece;
    for (const auto& [mask, v] : c.terms()) piece.coeff.emplace_back(mask, std::complex<double>(to_double(v.re), to_double(v.im)));
    Profile<double> p = to_d(key.profile);
    const bool limit = man.kind == ManifoldKind::torus || (p.m == 0 && p.mu == 0.0 && p.factors.empty() && !p.chart.domain.hi);
    if (limit) {
      piece.prof.emplace_back(1.0, p);
      if (man.kind == ManifoldKind::cylinder) {
        auto q = multiply(p, step);
        if (q) piece.prof.emplace_back(-1.0, *q);
      }
    } else {
      const bool compact = p.chart.domain.hi.has_value() || [&] {
        for (const auto& f : p.factors)
          if (f.order > 0) return true;
        return false;
      }();
      if (!compact && !(p.mu > delta)) throw ModelFormError("weighted_norm: decay rate does not exceed delta");
      Profile<double> w = p;
      w.mu -= delta;
      if (auto q = multiply(w, step)) piece.prof.emplace_back(1.0, *q);
      if (auto q = multiply(p, step)) piece.prof.emplace_back(-1.0, *q);
      piece.prof.emplace_back(1.0, p);
    }
    groups[key.k].push_back(std::move(piece));
  }
  // derivative tables: prof^{(l)} as lists of (coef, profile)
  auto derive = [](const std::vector<std::pair<double, Profile<double>>>& in) {
    std::vector<std::pair<double, Profile<double>>> out;
    for (const auto& [c, p] : in)
      for (const auto& [d, q] : derivative(p)) out.emplace_back(c * d, q);
    return out;
  };
  std::vector<double> grid;
  if (man.kind == ManifoldKind::torus) grid.push_back(0.0);
  else
    for (int i = 0; i <= samples; ++i) grid.push_back(t_max * i / samples);
  std::vector<double> binom(static_cast<std::size_t>(k + 1), 1.0);
  double total = 0.0;
  for (int j = 0; j <= k; ++j) {
    std::vector<double> acc(grid.size(), 0.0);
    for (const auto& [kk, pieces] : groups) {
      double nu2 = 0.0;
      for (int d = 0; d < a.dim(); ++d)
        if (man.periodic(d) && kk[static_cast<std::size_t>(d)] != 0) {
          double f = to_double(a.frequency(kk, d));
          nu2 += f * f;
        }
      const double nu = std::sqrt(nu2);
      // per derivative order l, the combined coefficient form at each grid point
      for (int l = 0; l <= j; ++l) {
        const int i = j - l;
        double bin = 1.0;
        for (int r = 0; r < i; ++r) bin = bin * (j - r) / (r + 1);
        const double w = bin * std::pow(nu, i);
        if (w == 0.0) continue;
        std::vector<std::vector<std::pair<double, Profile<double>>>> profs;
        for (const auto& pc : pieces) {
          auto pr = pc.prof;
          for (int r = 0; r < l; ++r) pr = derive(pr);
          profs.push_back(std::move(pr));
        }
        for (std::size_t g = 0; g < grid.size(); ++g) {
          std::map<Mask, std::complex<double>> val;
          for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
            double pv = 0.0;
            for (const auto& [c, p] : profs[pi]) pv += c * evaluate(p, grid[g]);
            if (pv == 0.0) continue;
            for (const auto& [mask, v] : pieces[pi].coeff) val[mask] += pv * v;
          }
          double n2 = 0.0;
          for (const auto& [mask, v] : val) n2 += std::norm(v);
          acc[g] += w * std::sqrt(n2);
        }
      }
    }
    total += *std::max_element(acc.begin(), acc.end());
  }
  return total;
}

/// True when some term of a constant-profile form carries a dt leg.
template <class S>
bool has_dt_leg(const ModelForm<S>& a) {
  if (a.manifold().t < 0) return false;
  const Mask bit = Mask(1) << a.manifold().t;
  for (const auto& [key, c] : a.terms())
    for (const auto& [mask, v] : c.terms())
      if (mask & bit) return true;
  return false;
}

/// Zero-mode part on a torus: the harmonic representative for the flat metric.
template <class S>
ModelForm<S> harmonic_project(const ModelForm<S>& a) {
  if (a.manifold().kind != ManifoldKind::torus) throw ModelFormError("harmonic_project needs a torus; use asymptotic_limit on cylinders");
  ModelForm<S> out(a.manifold(), a.degree());
  for (const auto& [key, c] : a.terms())
    if (ModelForm<S>::is_zero_index(key.k)) out.add(key.k, key.profile, c);
  return out;
}

/// Constant coefficients of the harmonic part on a torus or on the neck
/// (the neck coordinate is averaged by quadrature).
template <class S>
AltForm<double> class_vector(const ModelForm<S>& a) {
  const auto& m = a.manifold();
  if (m.kind == ManifoldKind::cylinder) throw ModelFormError("class_vector needs a closed model manifold");
  AltForm<double> out(a.dim(), a.degree());
  const double len = m.kind == ManifoldKind::neck ? to_double(m.neck_length) : 0.0;
  for (const auto& [key, c] : a.terms()) {
    if (!ModelForm<S>::is_zero_index(key.k)) continue;
    double w = 1.0;
    if (m.kind == ManifoldKind::neck && !(key.profile.is_constant() && !key.profile.chart.domain.lo && !key.profile.chart.domain.hi))
      w = integrate(key.profile, 0.0, len) / len;
    for (const auto& [mask, v] : c.terms()) out.add(mask, to_double(v.re) * w);
  }
  return out;
}

/// Sum of |coefficients| of the terms with a nonzero theta index, maximised
/// over the end coordinate (a sup-norm bound for the theta-dependent part).
template <class S>
double s1_invariance_defect(const ModelForm<S>& a, int samples = 400) {
  const int th = a.manifold().theta;
  if (th < 0) throw ModelFormError("manifold has no circle factor");
  ModelForm<S> part(a.manifold(), a.degree());
  for (const auto& [key, c] : a.terms())
    if (key.k[static_cast<std::size_t>(th)] != 0) part.add(key.k, key.profile, c);
  if (part.is_zero()) return 0.0;
  double best = 0.0;
  auto l1_at = [&](double s) {
    double acc = 0.0;
    for (const auto& [key, c] : part.terms()) {
      double pv = std::abs(evaluate(key.profile, s));
      if (pv == 0.0) continue;
      double cn = 0.0;
      for (const auto& [mask, v] : c.terms()) cn += std::norm(std::complex<double>(to_double(v.re), to_double(v.im)));
      acc += pv * std::sqrt(cn);
    }
    return acc;
  };
  if (a.manifold().t < 0) return l1_at(0.0);
  const double hi = a.manifold().kind == ManifoldKind::neck ? to_double(a.manifold().neck_length) : 40.0;
  for (int i = 0; i <= samples; ++i) best = std::max(best, l1_at(hi * i / samples));
  return best;
}

/// Value of the real form at a point, as constant coefficients.
template <class S>
AltForm<double> evaluate_at(const ModelForm<S>& a, const std::vector<double>& x) {
  const auto& m = a.manifold();
  AltForm<double> out(a.dim(), a.degree());
  for (const auto& [key, c] : a.terms()) {
    double phase = 0.0;
    for (int j = 0; j < a.dim(); ++j)
      if (m.periodic(j) && key.k[static_cast<std::size_t>(j)] != 0)
        phase += to_double(a.frequency(key.k, j)) * x[static_cast<std::size_t>(j)];
    double pv = m.t >= 0 ? evaluate(key.profile, x[static_cast<std::size_t>(m.t)]) : evaluate(key.profile, 0.0);
    if (pv == 0.0) continue;
    const double cr = std::cos(phase), si = std::sin(phase);
    for (const auto& [mask, v] : c.terms()) out.add(mask, pv * (to_double(v.re) * cr - to_double(v.im) * si));
  }
  return out;
}

}  // namespace g2cy
