#pragma once

// Torsion removal on collocation grids. The map
//   F(phi) = P(*0 Theta(phi)),  Theta(phi) = *_phi phi,
// is evaluated with Theta pointwise and d, P, *0 spectrally. Newton steps are
// exact 3-forms restricted, mode by mode, to the complement W of the
// infinitesimal diffeomorphism directions d i_X phi_ref inside the exact
// forms; the residual is projected onto the same space.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "g2cy/g2_kernel.hpp"
#include "g2cy/grid.hpp"
#include "g2cy/model_form.hpp"

namespace g2cy {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PositivityError : public SolverError {
 public:
  PositivityError(std::size_t point, std::array<double, 7> x, double eig)
      : SolverError(make_message(x, eig)), point_(point), x_(x), eig_(eig) {}
  std::size_t point() const { return point_; }
  const std::array<double, 7>& where() const { return x_; }
  double min_eigenvalue() const { return eig_; }

 private:
  static std::string make_message(const std::array<double, 7>& x, double eig) {
    std::ostringstream os;
    os << "positivity lost at (";
    for (int i = 0; i < 7; ++i) os << (i ? ", " : "") << x[static_cast<std::size_t>(i)];
    os << "): smallest metric eigenvalue " << eig;
    return os.str();
  }
  std::size_t point_;
  std::array<double, 7> x_;
  double eig_;
};

struct SolveOptions {
  int points = 8;                // collocation points per active direction
  double tolerance = 1e-10;      // on the gauge-fixed residual
  int max_iterations = 20;
  bool line_search = true;
  double min_eigenvalue = 0.1;   // positivity margin for g_phi
  double gmres_tolerance = 1e-8; // relative, per Newton step
  int gmres_max = 300;
  int refine_factor = 2;         // truncation floor grid
};

struct IterationRecord {
  int iteration = 0;
  double residual = 0.0;       // gauge-fixed
  double full_residual = 0.0;  // |F|
  double damping = 1.0;        // accepted step length (1 for the initial row)
  int gmres_iterations = 0;
  double seconds = 0.0;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  double full_residual = 0.0;
  double truncation_floor = 0.0;
  double torsion = 0.0;           // rms of d Theta on the grid
  double closedness = 0.0;        // rms of d phi on the grid
  double min_eigenvalue = 0.0;
  double class_change = 0.0;      // |zero mode(phi_tf) - zero mode(phi_0)|
  std::vector<IterationRecord> history;
  std::string message;

  std::string history_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "iteration,residual,full_residual,damping,gmres_iterations,seconds\n";
    for (const auto& h : history)
      os << h.iteration << ',' << h.residual << ',' << h.full_residual << ',' << h.damping << ',' << h.gmres_iterations << ','
         << h.seconds << '\n';
    return os.str();
  }
};

struct TorsionSolveState {
  GridForm base;        // closed discrete phi_0
  GridForm correction;  // d eta
  GridForm eta;         // coexact primitive with zero mean
  SolveReport report;

  GridForm phi() const { return base + correction; }
};

// ---------------------------------------------------------------------------
// pointwise evaluation

namespace detail {

inline std::array<double, 35> point_coeffs(const GridForm& a, std::size_t p) {
  std::array<double, 35> out{};
  for (std::size_t c = 0; c < 35; ++c) out[c] = a.data[c][p];
  return out;
}

inline double min_eig7(const std::array<double, 49>& g) {
  Eigen::Matrix<double, 7, 7> M;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) M(i, j) = g[static_cast<std::size_t>(i * 7 + j)];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 7, 7>> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline void check_three_form(const GridForm& phi) {
  if (phi.degree != 3) throw DimensionError("expected a 3-form field");
}

}  // namespace detail

/// Theta(phi) = *_phi phi at every grid point. Throws PositivityError when a
/// point is not positive or its metric has an eigenvalue below `margin`.
inline GridForm pointwise_dual(const GridForm& phi, double margin = 0.0, double* min_eig = nullptr) {
  detail::check_three_form(phi);
  GridForm out(phi.spec, 4);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < phi.points(); ++p) {
    G2Point<double> pt;
    try {
      pt = g2_point(detail::point_coeffs(phi, p));
    } catch (const G2KernelError&) {
      throw PositivityError(p, phi.spec.point(p), -std::numeric_limits<double>::infinity());
    }
    if (margin > 0.0 || min_eig) {
      double e = detail::min_eig7(pt.g);
      lowest = std::min(lowest, e);
      if (e < margin) throw PositivityError(p, phi.spec.point(p), e);
    }
    for (std::size_t c = 0; c < 35; ++c) out.data[c][p] = pt.dual[c];
  }
  if (min_eig) *min_eig = lowest;
  return out;
}

/// Directional derivative of Theta at phi along v, pointwise.
inline GridForm pointwise_dual_derivative(const GridForm& phi, const GridForm& v) {
  detail::check_three_form(phi);
  GridForm out(phi.spec, 4);
  std::array<Dual, 35> x{};
  for (std::size_t p = 0; p < phi.points(); ++p) {
    for (std::size_t c = 0; c < 35; ++c) x[c] = Dual(phi.data[c][p], v.data[c][p]);
    auto pt = g2_point(x);
    for (std::size_t c = 0; c < 35; ++c) out.data[c][p] = pt.dual[c].d;
  }
  return out;
}

/// Smallest eigenvalue of g_phi over the grid.
inline double min_metric_eigenvalue(const GridForm& phi) {
  double e = 0.0;
  pointwise_dual(phi, 0.0, &e);
  return e;
}

/// F(phi) = P(*0 Theta(phi)).
inline GridForm hitchin_map_F(const GridForm& phi) { return grid_exact_part(flat_star(pointwise_dual(phi))); }

/// Samples a closed model form and keeps only its class and exact part, so
/// the discrete field is closed for the spectral d. The dropped remainder is
/// returned through `dropped` (rms).
template <class S>
GridForm discretize_closed(const ModelForm<S>& phi, const GridSpec& spec, double* dropped = nullptr) {
  auto raw = sample(phi, spec);
  auto cls = class_vector(phi);
  GridForm out = constant_field(spec, cls) + grid_exact_part(raw);
  if (dropped) *dropped = (raw - out).rms();
  return out;
}

/// Torsion pair (|d phi|, |d *_phi phi|) of a grid field.
struct TorsionResidual {
  double closed = 0.0;
  double coclosed = 0.0;
  double min_eigenvalue = 0.0;
};

inline TorsionResidual torsion_residual(const GridForm& phi) {
  TorsionResidual r;
  auto theta = pointwise_dual(phi, 0.0, &r.min_eigenvalue);
  r.closed = grid_d(phi).rms();
  r.coclosed = grid_d(theta).rms();
  return r;
}

/// Grid on which a model form is resolved: `points` per direction along
/// which it varies, one point elsewhere. The circle slot is active only
/// when `with_theta` is set.
template <class S>
GridSpec solver_grid(const ModelForm<S>& phi, int points, bool with_theta) {
  const auto& m = phi.manifold();
  if (m.dim() != 7) throw GridError("solver_grid: model must be 7-dimensional");
  if (m.kind == ManifoldKind::cylinder) throw GridError("solver_grid: cylinders are not compact");
  if (points < 2) throw GridError("solver_grid: need at least 2 points per active direction");
  GridSpec s;
  std::array<bool, 7> active{};
  for (const auto& [key, c] : phi.terms()) {
    for (int j = 0; j < 7; ++j)
      if (m.periodic(j) && key.k[static_cast<std::size_t>(j)] != 0) active[static_cast<std::size_t>(j)] = true;
    if (m.t >= 0 && !key.profile.is_constant()) active[static_cast<std::size_t>(m.t)] = true;
  }
  if (m.theta >= 0) active[static_cast<std::size_t>(m.theta)] = with_theta;
  for (int j = 0; j < 7; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    s.length[uj] = j == m.t ? to_double(m.neck_length) : 2.0 * std::numbers::pi * to_double(m.period_over_2pi(j));
    s.n[uj] = active[uj] ? points : 1;
  }
  return s;
}

// ---------------------------------------------------------------------------
// gauge fixing

/// Per Fourier mode: an orthonormal basis W of the exact 3-forms orthogonal
/// to xi ^ i_X phi_ref, and the inverse of W^T *0 DTheta(phi_ref) W.
class GaugeFixing {
 public:
  GaugeFixing() = default;
  GaugeFixing(const GridSpec& spec, const AltForm<double>& phi_ref) : spec_(spec) {
    const auto& m3 = kernel::masks3();
    const auto m2 = masks_of_degree(7, 2);
    // J(:, b) = DTheta(phi_ref)(e_b), then *0
    const auto ref = pack3(phi_ref);
    Eigen::Matrix<double, 35, 35> SJ;
    {
      std::array<Dual, 35> x{};
      for (int b = 0; b < 35; ++b) {
        for (int c = 0; c < 35; ++c) x[static_cast<std::size_t>(c)] = Dual(ref[static_cast<std::size_t>(c)], c == b ? 1.0 : 0.0);
        auto pt = g2_point(x);
        GridSpec one;
        GridForm col(one, 4);
        for (std::size_t c = 0; c < 35; ++c) col.data[c][0] = pt.dual[c].d;
        auto st = flat_star(col);
        for (int c = 0; c < 35; ++c) SJ(c, b) = st.data[static_cast<std::size_t>(c)][0];
      }
    }
    // i_{e_i} phi_ref as 2-form coefficient vectors
    std::array<AltForm<double>, 7> contractions;
    for (int i = 0; i < 7; ++i) contractions[static_cast<std::size_t>(i)] = interior_basis(i, phi_ref);

    modes_.resize(spec.size());
    for (std::size_t p = 0; p < spec.size(); ++p) {
      bool ny = false;
      auto k = spec.mode(p, &ny);
      if (ny) continue;
      auto xi = spec.wave(k);
      double n2 = 0.0;
      for (double v : xi) n2 += v * v;
      if (n2 == 0.0) continue;
      AltForm<double> xif(7, 1);
      for (int j = 0; j < 7; ++j) xif.add(Mask(1) << j, xi[static_cast<std::size_t>(j)]);
      auto to_vec = [&](const AltForm<double>& a) {
        Eigen::Matrix<double, 35, 1> v;
        for (int c = 0; c < 35; ++c) v(c) = a.coeff(m3[static_cast<std::size_t>(c)]);
        return v;
      };
      Eigen::Matrix<double, 35, 21> E;
      for (int c = 0; c < 21; ++c) E.col(c) = to_vec(wedge(xif, AltForm<double>::monomial(7, indices_of(m2[static_cast<std::size_t>(c)]))));
      Eigen::Matrix<double, 35, 7> G;
      for (int i = 0; i < 7; ++i) G.col(i) = to_vec(wedge(xif, contractions[static_cast<std::size_t>(i)]));
      auto basis = [](const auto& A) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
        const auto& sv = svd.singularValues();
        int r = 0;
        while (r < sv.size() && sv(r) > 1e-10 * sv(0)) ++r;
        return Eigen::MatrixXd(svd.matrixU().leftCols(r));
      };
      Eigen::MatrixXd Q = basis(Eigen::MatrixXd(E));
      Eigen::MatrixXd Qg = basis(Eigen::MatrixXd(G));
      Eigen::MatrixXd rest = Q - Qg * (Qg.transpose() * Q);
      Eigen::MatrixXd W = basis(rest);
      Mode md;
      md.W = W;
      Eigen::MatrixXd B = W.transpose() * SJ * W;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
      if (!lu.isInvertible()) throw SolverError("gauge-fixed linearisation is singular at a Fourier mode");
      md.Binv = lu.inverse();
      md.active = true;
      modes_[p] = std::move(md);
    }
  }

  const GridSpec& spec() const { return spec_; }
  /// Dimension of W at a flat point index (0 for the zero and Nyquist modes).
  int rank(std::size_t p) const { return modes_[p].active ? static_cast<int>(modes_[p].W.cols()) : 0; }
  /// Smallest singular value of the per-mode block over all modes.
  double min_block_singular_value() const {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& m : modes_)
      if (m.active) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.Binv);
        s = std::min(s, 1.0 / svd.singularValues()(0));
      }
    return s;
  }

  GridForm project(const GridForm& a) const { return apply(a, false); }
  GridForm precondition(const GridForm& a) const { return apply(a, true); }

 private:
  struct Mode {
    bool active = false;
    Eigen::MatrixXd W, Binv;
  };

  GridForm apply(const GridForm& a, bool inverse) const {
    if (a.degree != 3 || !(a.spec == spec_)) throw GridError("gauge fixing: field does not match the grid");
    auto s = to_spectral(a);
    SpectralForm out(spec_, 3);
    Eigen::VectorXcd c(35);
    for (std::size_t p = 0; p < spec_.size(); ++p) {
      const auto& m = modes_[p];
      if (!m.active) continue;
      for (int i = 0; i < 35; ++i) c(i) = s.coeffs[static_cast<std::size_t>(i)][p];
      Eigen::VectorXcd y = m.W.transpose() * c;
      if (inverse) y = m.Binv * y;
      Eigen::VectorXcd r = m.W * y;
      for (int i = 0; i < 35; ++i) out.coeffs[static_cast<std::size_t>(i)][p] = r(i);
    }
    return to_grid(out);
  }

  GridSpec spec_;
  std::vector<Mode> modes_;
};

// ---------------------------------------------------------------------------
// GMRES (right preconditioned, restarted)

namespace detail {

inline double dot_all(const GridForm& a, const GridForm& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.data.size(); ++c)
    for (std::size_t p = 0; p < a.data[c].size(); ++p) s += a.data[c][p] * b.data[c][p];
  return s;
}

struct GmresResult {
  GridForm x;
  int iterations = 0;
  double relative_residual = 0.0;
};

template <class Op, class Prec>
GmresResult gmres(const Op& A, const Prec& M, const GridForm& b, double rtol, int max_it, int restart = 60) {
  GmresResult res;
  res.x = GridForm(b.spec, b.degree);
  const double bnorm = std::sqrt(dot_all(b, b));
  if (bnorm == 0.0) return res;
  GridForm r = b;
  double beta = bnorm;
  int total = 0;
  while (total < max_it) {
    std::vector<GridForm> V, Z;
    std::vector<std::vector<double>> H;  // column-major Hessenberg
    std::vector<double> cs, sn, g{beta};
    V.push_back(r * (1.0 / beta));
    int j = 0;
    for (; j < restart && total < max_it; ++j, ++total) {
      Z.push_back(M(V[static_cast<std::size_t>(j)]));
      GridForm w = A(Z.back());
      std::vector<double> h(static_cast<std::size_t>(j + 2), 0.0);
      for (int i = 0; i <= j; ++i) {
        h[static_cast<std::size_t>(i)] = dot_all(w, V[static_cast<std::size_t>(i)]);
        w -= V[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i)];
      }
      h[static_cast<std::size_t>(j + 1)] = std::sqrt(dot_all(w, w));
      for (int i = 0; i < j; ++i) {
        double t = cs[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i)] + sn[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i + 1)];
        h[static_cast<std::size_t>(i + 1)] = -sn[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i)] + cs[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i + 1)];
        h[static_cast<std::size_t>(i)] = t;
      }
      double den = std::hypot(h[static_cast<std::size_t>(j)], h[static_cast<std::size_t>(j + 1)]);
      double c = den == 0.0 ? 1.0 : h[static_cast<std::size_t>(j)] / den;
      double s = den == 0.0 ? 0.0 : h[static_cast<std::size_t>(j + 1)] / den;
      cs.push_back(c);
      sn.push_back(s);
      h[static_cast<std::size_t>(j)] = den;
      h[static_cast<std::size_t>(j + 1)] = 0.0;
      g.push_back(-s * g[static_cast<std::size_t>(j)]);
      g[static_cast<std::size_t>(j)] *= c;
      H.push_back(h);
      const double hn = std::sqrt(dot_all(w, w));
      if (std::abs(g[static_cast<std::size_t>(j + 1)]) <= rtol * bnorm || hn == 0.0) {
        ++j;
        ++total;
        break;
      }
      V.push_back(w * (1.0 / hn));
    }
    // back substitution
    std::vector<double> y(static_cast<std::size_t>(j), 0.0);
    for (int i = j - 1; i >= 0; --i) {
      double acc = g[static_cast<std::size_t>(i)];
      for (int k = i + 1; k < j; ++k) acc -= H[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(k)];
      y[static_cast<std::size_t>(i)] = acc / H[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < j; ++i) res.x += Z[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    r = b - A(res.x);
    beta = std::sqrt(dot_all(r, r));
    res.relative_residual = beta / bnorm;
    res.iterations = total;
    if (res.relative_residual <= rtol) break;
  }
  return res;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Newton

/// Gauge-fixed residual Pi_W(*0 Theta(phi)).
inline GridForm gauge_residual(const GaugeFixing& gf, const GridForm& phi) {
  return gf.project(flat_star(pointwise_dual(phi)));
}

/// Coexact primitive eta of an exact 3-form u: d eta = u, eta = d* Delta^{-1} u.
inline GridForm exact_primitive(const GridForm& u) {
  auto s = to_spectral(u);
  auto lower = masks_of_degree(7, u.degree - 1);
  auto out = map_modes(s, u.degree - 1, [&](const std::array<int, 7>& k, bool ny, const auto& in, auto& o) {
    if (ny) return;
    auto xi = u.spec.wave(k);
    double n2 = 0.0;
    for (double x : xi) n2 += x * x;
    if (n2 == 0.0) return;
    // u_k = i xi ^ eta_k with eta_k = -i i_xi u_k / |xi|^2
    std::vector<std::complex<double>> tmp(lower.size());
    detail::interior_covector(xi, s.masks, lower, in, tmp);
    for (std::size_t c = 0; c < tmp.size(); ++c) o[c] = tmp[c] * std::complex<double>(0.0, -1.0 / n2);
  });
  return to_grid(out);
}

/// Energy of the exact part of *0 Theta(phi) outside the coarse band, with
/// phi interpolated onto a grid refined by `factor`.
inline double truncation_floor(const GridForm& phi, int factor = 2) {
  auto fine = refine(phi, factor);
  auto F = to_spectral(grid_exact_part(flat_star(pointwise_dual(fine))));
  double acc = 0.0;
  for (std::size_t p = 0; p < fine.spec.size(); ++p) {
    auto k = fine.spec.mode(p);
    bool outside = false;
    for (int j = 0; j < 7; ++j) {
      const int nc = phi.spec.n[static_cast<std::size_t>(j)];
      if (nc > 1 && 2 * std::abs(k[static_cast<std::size_t>(j)]) >= nc) outside = true;
    }
    if (!outside) continue;
    for (const auto& c : F.coeffs) acc += std::norm(c[p]);
  }
  return std::sqrt(acc);
}

/// Newton solve of F(phi_0 + u) = 0 over u in W. `initial` seeds u.
inline TorsionSolveState remove_torsion(const GridForm& phi0, const SolveOptions& opts,
                                        const std::optional<GridForm>& initial = std::nullopt) {
  detail::check_three_form(phi0);
  if (!(opts.tolerance > 0.0)) throw std::invalid_argument("remove_torsion: tolerance must be positive");
  if (opts.max_iterations < 0) throw std::invalid_argument("remove_torsion: max_iterations must be nonnegative");
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  TorsionSolveState st;
  st.base = phi0;
  st.correction = GridForm(phi0.spec, 3);
  const AltForm<double> ref = zero_mode(phi0);
  GaugeFixing gf(phi0.spec, ref);
  if (initial) st.correction = gf.project(*initial);

  auto full_norm = [&](const GridForm& phi) { return hitchin_map_F(phi).rms(); };
  GridForm phi = st.phi();
  pointwise_dual(phi, opts.min_eigenvalue);  // positivity of the start
  GridForm R = gauge_residual(gf, phi);
  double r = R.rms();
  st.report.history.push_back({0, r, full_norm(phi), 1.0, 0, elapsed()});

  int it = 0;
  while (r > opts.tolerance && it < opts.max_iterations) {
    ++it;
    auto A = [&](const GridForm& v) { return gf.project(flat_star(pointwise_dual_derivative(phi, v))); };
    auto M = [&](const GridForm& v) { return gf.precondition(v); };
    auto lin = detail::gmres(A, M, R * -1.0, opts.gmres_tolerance, opts.gmres_max);
    double lambda = 1.0;
    bool accepted = false;
    GridForm trial_phi, trial_R;
    double trial_r = 0.0;
    while (lambda >= 1.0 / 1024.0) {
      GridForm trial_u = st.correction + lin.x * lambda;
      trial_phi = st.base + trial_u;
      try {
        pointwise_dual(trial_phi, opts.min_eigenvalue);
        trial_R = gauge_residual(gf, trial_phi);
        trial_r = trial_R.rms();
        if (!opts.line_search || trial_r < (1.0 - 1e-4 * lambda) * r) {
          st.correction = trial_u;
          accepted = true;
          break;
        }
      } catch (const PositivityError&) {
        if (!opts.line_search) throw;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      st.report.message = "line search failed to reduce the residual";
      break;
    }
    phi = trial_phi;
    R = trial_R;
    r = trial_r;
    st.report.history.push_back({it, r, full_norm(phi), lambda, lin.iterations, elapsed()});
  }
  st.report.iterations = it;
  st.report.residual = r;
  st.report.converged = r <= opts.tolerance;
  if (!st.report.converged && st.report.message.empty())
    st.report.message = "no convergence within " + std::to_string(opts.max_iterations) + " iterations";
  if (st.report.converged) st.report.message = "converged";
  st.report.full_residual = full_norm(phi);
  auto tr = torsion_residual(phi);
  st.report.torsion = tr.coclosed;
  st.report.closedness = tr.closed;
  st.report.min_eigenvalue = tr.min_eigenvalue;
  st.report.truncation_floor = opts.refine_factor > 1 ? truncation_floor(phi, opts.refine_factor) : 0.0;
  st.report.class_change = (zero_mode(phi) - zero_mode(phi0)).max_abs();
  st.eta = exact_primitive(st.correction);
  return st;
}

/// Largest variation along the circle slot over all other coordinates.
inline double s1_defect(const GridForm& a, int theta = 0) {
  const int nt = a.spec.n[static_cast<std::size_t>(theta)];
  if (nt == 1) return 0.0;
  std::size_t stride = 1;
  for (int j = 6; j > theta; --j) stride *= static_cast<std::size_t>(a.spec.n[static_cast<std::size_t>(j)]);
  double worst = 0.0;
  for (const auto& comp : a.data)
    for (std::size_t p = 0; p < comp.size(); ++p) {
      const std::size_t q = (p / stride) % static_cast<std::size_t>(nt);
      if (q == 0) continue;
      worst = std::max(worst, std::abs(comp[p] - comp[p - q * stride]));
    }
  return worst;
}

/// Solve restricted to circle-invariant fields (the circle slot collapsed).
template <class S>
TorsionSolveState s1_invariant_solve(const ModelForm<S>& phi, const SolveOptions& opts) {
  if (phi.manifold().theta < 0) throw SolverError("s1_invariant_solve: model has no circle factor");
  if (s1_invariance_defect(phi) != 0.0) throw SolverError("s1_invariant_solve: input depends on theta");
  auto spec = solver_grid(phi, opts.points, false);
  return remove_torsion(discretize_closed(phi, spec), opts);
}

/// Solve with the circle slot resolved like every other active direction.
template <class S>
TorsionSolveState unrestricted_solve(const ModelForm<S>& phi, const SolveOptions& opts) {
  auto spec = solver_grid(phi, opts.points, true);
  return remove_torsion(discretize_closed(phi, spec), opts);
}

/// Restriction of a field on a grid with a resolved circle slot to theta = 0.
inline GridForm theta_slice(const GridForm& a, int theta = 0) {
  GridSpec s = a.spec;
  s.n[static_cast<std::size_t>(theta)] = 1;
  GridForm out(s, a.degree);
  for (std::size_t p = 0; p < a.points(); ++p) {
    auto x = a.spec.point(p);
    if (x[static_cast<std::size_t>(theta)] != 0.0) continue;
    std::size_t q = 0;
    for (int j = 0; j < 7; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const int idx = static_cast<int>(std::lround(x[uj] * s.n[uj] / s.length[uj]));
      q = q * static_cast<std::size_t>(s.n[uj]) + static_cast<std::size_t>(s.n[uj] == 1 ? 0 : idx);
    }
    for (std::size_t c = 0; c < a.components(); ++c) out.data[c][q] = a.data[c][p];
  }
  return out;
}

}  // namespace g2cy
