#pragma once

// Collocation grids on flat 7-tori and spectral exterior calculus on them.
// A direction with one point is collapsed: fields are constant along it.
// Fourier modes with a Nyquist index are discarded by d and by the exact
// projection, so every operator acts on the symmetric band |k_j| < n_j / 2.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "g2cy/alt_form.hpp"
#include "g2cy/model_form.hpp"

namespace g2cy {

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  std::array<int, 7> n{1, 1, 1, 1, 1, 1, 1};
  std::array<double, 7> length{};  // periods

  std::size_t size() const {
    std::size_t s = 1;
    for (int v : n) s *= static_cast<std::size_t>(v);
    return s;
  }
  friend bool operator==(const GridSpec& a, const GridSpec& b) { return a.n == b.n && a.length == b.length; }

  /// Coordinates of a flat point index.
  std::array<double, 7> point(std::size_t idx) const {
    std::array<double, 7> x{};
    for (int j = 6; j >= 0; --j) {
      const auto nj = static_cast<std::size_t>(n[static_cast<std::size_t>(j)]);
      x[static_cast<std::size_t>(j)] = static_cast<double>(idx % nj) * length[static_cast<std::size_t>(j)] / static_cast<double>(nj);
      idx /= nj;
    }
    return x;
  }
  /// Signed Fourier index per direction, and whether any is a Nyquist index.
  std::array<int, 7> mode(std::size_t idx, bool* nyquist = nullptr) const {
    std::array<int, 7> k{};
    bool ny = false;
    for (int j = 6; j >= 0; --j) {
      const int nj = n[static_cast<std::size_t>(j)];
      int q = static_cast<int>(idx % static_cast<std::size_t>(nj));
      idx /= static_cast<std::size_t>(nj);
      if (nj % 2 == 0 && q == nj / 2) ny = true;
      k[static_cast<std::size_t>(j)] = q <= nj / 2 ? q : q - nj;
    }
    if (nyquist) *nyquist = ny;
    return k;
  }
  std::array<double, 7> wave(const std::array<int, 7>& k) const {
    std::array<double, 7> xi{};
    for (int j = 0; j < 7; ++j)
      xi[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * k[static_cast<std::size_t>(j)] / length[static_cast<std::size_t>(j)];
    return xi;
  }
};

/// Real k-form field on a grid: one array of point values per monomial.
struct GridForm {
  GridSpec spec;
  int degree = 0;
  std::vector<Mask> masks;
  std::vector<std::vector<double>> data;

  GridForm() = default;
  GridForm(const GridSpec& s, int deg) : spec(s), degree(deg), masks(masks_of_degree(7, deg)) {
    data.assign(masks.size(), std::vector<double>(s.size(), 0.0));
  }
  std::size_t components() const { return masks.size(); }
  std::size_t points() const { return spec.size(); }

  AltForm<double> at(std::size_t p) const {
    AltForm<double> out(7, degree);
    for (std::size_t c = 0; c < masks.size(); ++c) out.add(masks[c], data[c][p]);
    return out;
  }
  void set(std::size_t p, const AltForm<double>& a) {
    for (std::size_t c = 0; c < masks.size(); ++c) data[c][p] = a.coeff(masks[c]);
  }
  GridForm& operator+=(const GridForm& o) {
    for (std::size_t c = 0; c < data.size(); ++c)
      for (std::size_t p = 0; p < data[c].size(); ++p) data[c][p] += o.data[c][p];
    return *this;
  }
  GridForm& operator-=(const GridForm& o) {
    for (std::size_t c = 0; c < data.size(); ++c)
      for (std::size_t p = 0; p < data[c].size(); ++p) data[c][p] -= o.data[c][p];
    return *this;
  }
  GridForm& operator*=(double s) {
    for (auto& v : data)
      for (auto& x : v) x *= s;
    return *this;
  }
  friend GridForm operator+(GridForm a, const GridForm& b) { return a += b; }
  friend GridForm operator-(GridForm a, const GridForm& b) { return a -= b; }
  friend GridForm operator*(GridForm a, double s) { return a *= s; }

  /// Root mean square over points of the Euclidean coefficient norm.
  double rms() const {
    double acc = 0.0;
    for (const auto& v : data)
      for (double x : v) acc += x * x;
    return std::sqrt(acc / static_cast<double>(points()));
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data)
      for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double dot(const GridForm& o) const {
    double acc = 0.0;
    for (std::size_t c = 0; c < data.size(); ++c)
      for (std::size_t p = 0; p < data[c].size(); ++p) acc += data[c][p] * o.data[c][p];
    return acc / static_cast<double>(points());
  }
};

/// Fourier coefficients (normalized by the point count) of a GridForm.
struct SpectralForm {
  GridSpec spec;
  int degree = 0;
  std::vector<Mask> masks;
  std::vector<std::vector<std::complex<double>>> coeffs;

  SpectralForm() = default;
  SpectralForm(const GridSpec& s, int deg) : spec(s), degree(deg), masks(masks_of_degree(7, deg)) {
    coeffs.assign(masks.size(), std::vector<std::complex<double>>(s.size()));
  }
};

namespace detail {

class FftPlans {
 public:
  explicit FftPlans(const GridSpec& s) : n_(s.size()) {
    buf_ = fftw_alloc_complex(n_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft(7, s.n.data(), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(7, s.n.data(), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPlans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
    for (std::size_t i = 0; i < n_; ++i) {
      buf_[i][0] = in[i];
      buf_[i][1] = 0.0;
    }
    fftw_execute(fwd_);
    out.resize(n_);
    const double inv = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = {buf_[i][0] * inv, buf_[i][1] * inv};
  }
  void backward(const std::vector<std::complex<double>>& in, std::vector<double>& out) {
    for (std::size_t i = 0; i < n_; ++i) {
      buf_[i][0] = in[i].real();
      buf_[i][1] = in[i].imag();
    }
    fftw_execute(bwd_);
    out.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = buf_[i][0];
  }

  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

 private:
  std::size_t n_;
  fftw_complex* buf_;
  fftw_plan fwd_, bwd_;
};

inline std::shared_ptr<FftPlans> plans_for(const GridSpec& s) {
  thread_local std::vector<std::pair<GridSpec, std::shared_ptr<FftPlans>>> cache;
  for (const auto& [k, v] : cache)
    if (k == s) return v;
  auto p = std::make_shared<FftPlans>(s);
  cache.emplace_back(s, p);
  return p;
}

}  // namespace detail

inline SpectralForm to_spectral(const GridForm& f) {
  SpectralForm out(f.spec, f.degree);
  auto plans = detail::plans_for(f.spec);
  for (std::size_t c = 0; c < f.components(); ++c) plans->forward(f.data[c], out.coeffs[c]);
  return out;
}

inline GridForm to_grid(const SpectralForm& s) {
  GridForm out(s.spec, s.degree);
  auto plans = detail::plans_for(s.spec);
  for (std::size_t c = 0; c < s.masks.size(); ++c) plans->backward(s.coeffs[c], out.data[c]);
  return out;
}

/// Samples a real model form at the grid points.
template <class S>
GridForm sample(const ModelForm<S>& a, const GridSpec& spec) {
  if (a.dim() != 7) throw GridError("sample: grids are 7-dimensional");
  GridForm out(spec, a.degree());
  for (std::size_t p = 0; p < spec.size(); ++p) {
    auto x = spec.point(p);
    out.set(p, evaluate_at(a, std::vector<double>(x.begin(), x.end())));
  }
  return out;
}

/// Constant field.
inline GridForm constant_field(const GridSpec& spec, const AltForm<double>& c) {
  GridForm out(spec, c.degree());
  for (std::size_t i = 0; i < out.masks.size(); ++i) std::fill(out.data[i].begin(), out.data[i].end(), c.coeff(out.masks[i]));
  return out;
}

/// Applies a per-mode complex-linear map (given as a callback on the
/// coefficient vector of one mode) to every Fourier mode.
template <class F>
SpectralForm map_modes(const SpectralForm& in, int out_degree, F&& f) {
  SpectralForm out(in.spec, out_degree);
  const std::size_t nin = in.masks.size();
  std::vector<std::complex<double>> cin(nin), cout(out.masks.size());
  for (std::size_t p = 0; p < in.spec.size(); ++p) {
    bool ny = false;
    auto k = in.spec.mode(p, &ny);
    for (std::size_t c = 0; c < nin; ++c) cin[c] = in.coeffs[c][p];
    std::fill(cout.begin(), cout.end(), std::complex<double>{});
    f(k, ny, cin, cout);
    for (std::size_t c = 0; c < cout.size(); ++c) out.coeffs[c][p] = cout[c];
  }
  return out;
}

namespace detail {

// Position of a mask within masks_of_degree(7, popcount(mask)).
inline int mask_position(Mask m) {
  static const std::array<int, 128> table = [] {
    std::array<int, 128> t{};
    for (int d = 0; d <= 7; ++d) {
      auto ms = masks_of_degree(7, d);
      for (std::size_t i = 0; i < ms.size(); ++i) t[ms[i]] = static_cast<int>(i);
    }
    return t;
  }();
  return table[m];
}

// xi ^ (coefficient vector) on masks of degree deg -> deg + 1.
inline void wedge_covector(const std::array<double, 7>& xi, const std::vector<Mask>& from, const std::vector<Mask>& to,
                           const std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out,
                           std::complex<double> factor) {
  for (std::size_t a = 0; a < from.size(); ++a) {
    if (in[a] == 0.0) continue;
    for (int j = 0; j < 7; ++j) {
      if (xi[static_cast<std::size_t>(j)] == 0.0 || (from[a] >> j & 1)) continue;
      Mask m = from[a] | (Mask(1) << j);
      double s = wedge_sign(Mask(1) << j, from[a]);
      out[static_cast<std::size_t>(mask_position(m))] += factor * xi[static_cast<std::size_t>(j)] * s * in[a];
    }
  }
}

inline void interior_covector(const std::array<double, 7>& xi, const std::vector<Mask>& from, const std::vector<Mask>& to,
                              const std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) {
  for (std::size_t a = 0; a < from.size(); ++a) {
    if (in[a] == 0.0) continue;
    for (int j = 0; j < 7; ++j) {
      if (xi[static_cast<std::size_t>(j)] == 0.0 || !(from[a] >> j & 1)) continue;
      Mask m = from[a] & ~(Mask(1) << j);
      double s = (std::popcount(from[a] & ((Mask(1) << j) - 1)) % 2) ? -1.0 : 1.0;
      out[static_cast<std::size_t>(mask_position(m))] += xi[static_cast<std::size_t>(j)] * s * in[a];
    }
  }
}

}  // namespace detail

/// Spectral exterior derivative.
inline SpectralForm spectral_d(const SpectralForm& a) {
  if (a.degree >= 7) return SpectralForm(a.spec, 7);
  const auto& from = a.masks;
  auto to = masks_of_degree(7, a.degree + 1);
  return map_modes(a, a.degree + 1, [&](const std::array<int, 7>& k, bool ny, const auto& in, auto& out) {
    if (ny) return;
    detail::wedge_covector(a.spec.wave(k), from, to, in, out, {0.0, 1.0});
  });
}

inline GridForm grid_d(const GridForm& a) { return to_grid(spectral_d(to_spectral(a))); }

/// Orthogonal projection onto exact forms: xi ^ i_xi c / |xi|^2 per mode.
inline SpectralForm exact_part(const SpectralForm& a) {
  if (a.degree == 0) return SpectralForm(a.spec, 0);
  auto lower = masks_of_degree(7, a.degree - 1);
  return map_modes(a, a.degree, [&](const std::array<int, 7>& k, bool ny, const auto& in, auto& out) {
    if (ny) return;
    auto xi = a.spec.wave(k);
    double n2 = 0.0;
    for (double x : xi) n2 += x * x;
    if (n2 == 0.0) return;
    std::vector<std::complex<double>> mid(lower.size());
    detail::interior_covector(xi, a.masks, lower, in, mid);
    detail::wedge_covector(xi, lower, a.masks, mid, out, {1.0 / n2, 0.0});
  });
}

inline GridForm grid_exact_part(const GridForm& a) { return to_grid(exact_part(to_spectral(a))); }

/// Zero Fourier mode (the grid mean) as a constant form.
inline AltForm<double> zero_mode(const GridForm& a) {
  AltForm<double> out(7, a.degree);
  for (std::size_t c = 0; c < a.components(); ++c) {
    double acc = 0.0;
    for (double x : a.data[c]) acc += x;
    out.add(a.masks[c], acc / static_cast<double>(a.points()));
  }
  return out;
}

/// Drops Fourier modes with a Nyquist index.
inline GridForm drop_nyquist(const GridForm& a) {
  auto s = to_spectral(a);
  auto t = map_modes(s, a.degree, [](const std::array<int, 7>&, bool ny, const auto& in, auto& out) {
    if (!ny) out = in;
  });
  return to_grid(t);
}

/// Band-limited interpolation onto a finer grid (n_j -> factor n_j on every
/// non-collapsed direction).
inline GridForm refine(const GridForm& a, int factor) {
  GridSpec fine = a.spec;
  for (int& v : fine.n)
    if (v > 1) v *= factor;
  auto coarse = to_spectral(a);
  SpectralForm out(fine, a.degree);
  for (std::size_t p = 0; p < a.spec.size(); ++p) {
    bool ny = false;
    auto k = a.spec.mode(p, &ny);
    if (ny) continue;
    std::size_t q = 0;
    for (int j = 0; j < 7; ++j) {
      int nj = fine.n[static_cast<std::size_t>(j)];
      int kj = k[static_cast<std::size_t>(j)];
      q = q * static_cast<std::size_t>(nj) + static_cast<std::size_t>(kj >= 0 ? kj : kj + nj);
    }
    for (std::size_t c = 0; c < a.components(); ++c) out.coeffs[c][q] = coarse.coeffs[c][p];
  }
  return to_grid(out);
}

/// Flat Hodge star in the grid coordinates (Euclidean metric).
inline GridForm flat_star(const GridForm& a) {
  GridForm out(a.spec, 7 - a.degree);
  const Mask full = (Mask(1) << 7) - 1;
  for (std::size_t c = 0; c < a.components(); ++c) {
    Mask m = a.masks[c];
    Mask r = full & ~m;
    double s = wedge_sign(m, r);
    auto& dst = out.data[static_cast<std::size_t>(detail::mask_position(r))];
    for (std::size_t p = 0; p < a.points(); ++p) dst[p] = s * a.data[c][p];
  }
  return out;
}

}  // namespace g2cy
