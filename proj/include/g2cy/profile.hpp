#pragma once

// Closed-form profiles in the end coordinate: t^m e^{-mu t} times a product of
// smooth-step factors. The smooth step h(s) = f(s) / (f(s) + f(1 - s)),
// f(s) = exp(-1/s), is 0 for s <= 0 and 1 for s >= 1.
//
// A profile is written in a chart variable t = dir * s + shift of the
// ambient coordinate s, and carries the closed s-interval on which it lives
// (outside it the profile is zero).

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "g2cy/scalar.hpp"

namespace g2cy {

class ProfileError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr int kMaxPolyDegree = 8;

/// h(s), h'(s), ..., h^{(order)}(s).
inline std::vector<double> smooth_step_jet(double s, int order) {
  std::vector<double> out(static_cast<std::size_t>(order + 1), 0.0);
  if (s <= 0.0) return out;
  if (s >= 1.0) {
    out[0] = 1.0;
    return out;
  }
  const std::size_t n = out.size();
  // Taylor coefficients of exp(u) given those of u.
  auto exp_series = [n](const std::vector<double>& u) {
    std::vector<double> e(n, 0.0);
    if (u[0] < -700.0) return e;
    e[0] = std::exp(u[0]);
    for (std::size_t k = 1; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * u[j] * e[k - j];
      e[k] = acc / static_cast<double>(k);
    }
    return e;
  };
  std::vector<double> u(n), w(n);
  const double r = 1.0 - s;
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = -((j % 2) ? -1.0 : 1.0) / std::pow(s, static_cast<double>(j + 1));
    w[j] = -1.0 / std::pow(r, static_cast<double>(j + 1));
  }
  std::vector<double> a = exp_series(u), g = exp_series(w), b(n), q(n);
  for (std::size_t k = 0; k < n; ++k) b[k] = a[k] + g[k];
  for (std::size_t k = 0; k < n; ++k) {
    double acc = a[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= b[j] * q[k - j];
    q[k] = acc / b[0];
  }
  double fact = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    out[k] = q[k] * fact;
  }
  return out;
}

inline double smooth_step(double s) { return smooth_step_jet(s, 0)[0]; }

/// h^{(order)}(t - a). order 0 is the step itself; its support is [a, inf),
/// higher orders are supported in [a, a + 1].
template <class S>
struct CutoffFactor {
  S a;
  int order = 0;

  friend bool operator==(const CutoffFactor& x, const CutoffFactor& y) { return x.a == y.a && x.order == y.order; }
  friend bool operator<(const CutoffFactor& x, const CutoffFactor& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.order < y.order;
  }
};

/// Closed interval with optional infinite ends.
template <class S>
struct Interval {
  std::optional<S> lo, hi;

  static Interval all() { return {}; }
  static Interval closed(S a, S b) { return {std::move(a), std::move(b)}; }
  static Interval from(S a) { return {std::move(a), std::nullopt}; }

  Interval intersect(const Interval& o) const {
    Interval r = *this;
    if (o.lo && (!r.lo || *o.lo > *r.lo)) r.lo = o.lo;
    if (o.hi && (!r.hi || *o.hi < *r.hi)) r.hi = o.hi;
    return r;
  }
  bool thin() const { return lo && hi && !(*lo < *hi); }
  bool within(const Interval& o) const {
    if (o.lo && (!lo || *lo < *o.lo)) return false;
    if (o.hi && (!hi || *hi > *o.hi)) return false;
    return true;
  }
  friend bool operator==(const Interval& x, const Interval& y) { return x.lo == y.lo && x.hi == y.hi; }
  friend bool operator<(const Interval& x, const Interval& y) {
    // nullopt sorts first on both ends
    return std::tie(x.lo, x.hi) < std::tie(y.lo, y.hi);
  }
};

/// Affine chart t = dir * s + shift, valid on `domain` (an s-interval).
template <class S>
struct Chart {
  int dir = 1;
  S shift{0};
  Interval<S> domain;

  S to_t(const S& s) const { return S(S(dir) * s + shift); }
  Interval<S> to_t(const Interval<S>& iv) const {
    Interval<S> out;
    auto map = [&](const std::optional<S>& x) { return x ? std::optional<S>(to_t(*x)) : std::nullopt; };
    if (dir > 0) {
      out.lo = map(iv.lo);
      out.hi = map(iv.hi);
    } else {
      out.lo = map(iv.hi);
      out.hi = map(iv.lo);
    }
    return out;
  }
  Interval<S> to_s(const Interval<S>& iv) const {
    auto map = [&](const std::optional<S>& x) { return x ? std::optional<S>(S(S(dir) * (*x - shift))) : std::nullopt; };
    Interval<S> out;
    if (dir > 0) {
      out.lo = map(iv.lo);
      out.hi = map(iv.hi);
    } else {
      out.lo = map(iv.hi);
      out.hi = map(iv.lo);
    }
    return out;
  }

  friend bool operator==(const Chart& x, const Chart& y) {
    return x.dir == y.dir && x.shift == y.shift && x.domain == y.domain;
  }
  friend bool operator<(const Chart& x, const Chart& y) {
    if (x.dir != y.dir) return x.dir < y.dir;
    if (x.shift != y.shift) return x.shift < y.shift;
    return x.domain < y.domain;
  }
};

/// t^m e^{-mu t} prod h^{(k_i)}(t - a_i) on a chart.
template <class S>
struct Profile {
  Chart<S> chart;
  int m = 0;
  S mu{0};
  std::vector<CutoffFactor<S>> factors;  // sorted

  bool is_constant() const { return m == 0 && mu == S(0) && factors.empty(); }

  /// Support in the chart variable t, before intersecting with the domain.
  Interval<S> factor_support_t() const {
    Interval<S> iv;
    for (const auto& f : factors) {
      Interval<S> own = f.order == 0 ? Interval<S>::from(f.a) : Interval<S>::closed(f.a, S(f.a + S(1)));
      iv = iv.intersect(own);
    }
    return iv;
  }
  /// Support in s.
  Interval<S> support() const { return chart.to_s(factor_support_t()).intersect(chart.domain); }

  friend bool operator==(const Profile& x, const Profile& y) {
    return x.chart == y.chart && x.m == y.m && x.mu == y.mu && x.factors == y.factors;
  }
  friend bool operator<(const Profile& x, const Profile& y) {
    if (!(x.chart == y.chart)) return x.chart < y.chart;
    if (x.m != y.m) return x.m < y.m;
    if (x.mu != y.mu) return x.mu < y.mu;
    return x.factors < y.factors;
  }
};

/// The constant profile 1 (with the trivial chart and no domain limits).
template <class S>
Profile<S> unit_profile() {
  return Profile<S>{};
}

/// Drops factors that are identically 1 on the support of the rest and
/// returns nothing when the profile vanishes identically.
template <class S>
std::optional<Profile<S>> simplify(Profile<S> p) {
  std::sort(p.factors.begin(), p.factors.end());
  const Interval<S> dom_t = p.chart.to_t(p.chart.domain);
  bool changed = true;
  while (changed) {
    changed = false;
    Interval<S> whole = p.factor_support_t().intersect(dom_t);
    if (whole.thin()) return std::nullopt;
    for (std::size_t i = 0; i < p.factors.size(); ++i) {
      Interval<S> rest = dom_t;
      for (std::size_t j = 0; j < p.factors.size(); ++j) {
        if (j == i) continue;
        const auto& f = p.factors[j];
        rest = rest.intersect(f.order == 0 ? Interval<S>::from(f.a) : Interval<S>::closed(f.a, S(f.a + S(1))));
      }
      const auto& f = p.factors[i];
      Interval<S> right = Interval<S>::from(S(f.a + S(1)));
      Interval<S> left{std::nullopt, f.a};
      if (rest.within(left)) return std::nullopt;
      if (rest.within(right)) {
        if (f.order == 0) {
          p.factors.erase(p.factors.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
          break;
        }
        return std::nullopt;
      }
    }
  }
  // Domain ends already implied by the factor support are dropped so that
  // equal functions get equal keys.
  {
    Interval<S> fs = p.chart.to_s(p.factor_support_t());
    if (p.chart.domain.lo && fs.lo && !(*fs.lo < *p.chart.domain.lo)) p.chart.domain.lo.reset();
    if (p.chart.domain.hi && fs.hi && !(*fs.hi > *p.chart.domain.hi)) p.chart.domain.hi.reset();
  }
  // A profile without factors and without decay or growth forgets its chart
  // except for the domain.
  if (p.m == 0 && p.mu == S(0) && p.factors.empty()) {
    p.chart.dir = 1;
    p.chart.shift = S(0);
  }
  return p;
}

/// Product of two profiles; nothing when the product vanishes by support.
template <class S>
std::optional<Profile<S>> multiply(const Profile<S>& x, const Profile<S>& y) {
  Interval<S> dom = x.chart.domain.intersect(y.chart.domain);
  if (dom.thin()) return std::nullopt;
  // Supports in s must overlap for a nonzero product.
  if (x.support().intersect(y.support()).thin()) return std::nullopt;
  const bool xc = x.m == 0 && x.mu == S(0) && x.factors.empty();
  const bool yc = y.m == 0 && y.mu == S(0) && y.factors.empty();
  Profile<S> out;
  if (xc) out.chart = y.chart;
  else if (yc) out.chart = x.chart;
  else {
    if (x.chart.dir != y.chart.dir || x.chart.shift != y.chart.shift)
      throw ProfileError("product of profiles written in different charts");
    out.chart = x.chart;
  }
  out.chart.domain = dom;
  out.m = x.m + y.m;
  if (out.m > kMaxPolyDegree) throw ProfileError("polynomial degree cap exceeded");
  out.mu = S(x.mu + y.mu);
  out.factors = x.factors;
  out.factors.insert(out.factors.end(), y.factors.begin(), y.factors.end());
  return simplify(out);
}

/// d/ds as a list of (coefficient, profile).
template <class S>
std::vector<std::pair<S, Profile<S>>> derivative(const Profile<S>& p) {
  std::vector<std::pair<S, Profile<S>>> out;
  const S dir(p.chart.dir);
  auto push = [&](S c, Profile<S> q) {
    if (is_zero(c)) return;
    if (auto s = simplify(std::move(q))) out.emplace_back(std::move(c), std::move(*s));
  };
  if (p.m > 0) {
    Profile<S> q = p;
    q.m -= 1;
    push(S(dir * S(p.m)), q);
  }
  if (p.mu != S(0)) push(S(-dir * p.mu), p);
  for (std::size_t i = 0; i < p.factors.size(); ++i) {
    Profile<S> q = p;
    q.factors[i].order += 1;
    push(dir, q);
  }
  return out;
}

/// Value at s (zero outside the domain).
template <class S>
double evaluate(const Profile<S>& p, double s) {
  const auto& dom = p.chart.domain;
  if (dom.lo && s < to_double(*dom.lo)) return 0.0;
  if (dom.hi && s > to_double(*dom.hi)) return 0.0;
  const double t = static_cast<double>(p.chart.dir) * s + to_double(p.chart.shift);
  double v = std::exp(-to_double(p.mu) * t);
  for (int i = 0; i < p.m; ++i) v *= t;
  for (const auto& f : p.factors) {
    v *= smooth_step_jet(t - to_double(f.a), f.order)[static_cast<std::size_t>(f.order)];
    if (v == 0.0) return 0.0;
  }
  return v;
}

/// Integral over [lo, hi] in s, split at the factor breakpoints.
template <class S>
double integrate(const Profile<S>& p, double lo, double hi) {
  Interval<S> sup = p.support();
  if (sup.lo) lo = std::max(lo, to_double(*sup.lo));
  if (sup.hi) hi = std::min(hi, to_double(*sup.hi));
  if (!(lo < hi)) return 0.0;
  std::vector<double> cuts{lo, hi};
  for (const auto& f : p.factors)
    for (double a : {to_double(f.a), to_double(f.a) + 1.0}) {
      double s = static_cast<double>(p.chart.dir) * (a - to_double(p.chart.shift));
      if (s > lo && s < hi) cuts.push_back(s);
    }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i] < cuts[i + 1])) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double s) { return evaluate(p, s); }, cuts[i], cuts[i + 1], 15, 1e-14);
  }
  return total;
}

/// Exact integral of t^m e^{-mu t} from t to infinity, as coefficients of
/// t^j e^{-mu t}, j = 0..m. Requires mu > 0.
template <class S>
std::vector<S> tail_integral_coefficients(int m, const S& mu) {
  if (!(mu > S(0))) throw ProfileError("tail integral needs a decaying profile");
  std::vector<S> c(static_cast<std::size_t>(m + 1));
  // m!/(j! mu^{m-j+1})
  for (int j = 0; j <= m; ++j) {
    S v(1);
    for (int i = j + 1; i <= m; ++i) v *= S(i);
    for (int i = 0; i < m - j + 1; ++i) v /= mu;
    c[static_cast<std::size_t>(j)] = v;
  }
  return c;
}

}  // namespace g2cy
