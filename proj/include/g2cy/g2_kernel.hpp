#pragma once

// Fast pointwise G2 algebra on packed coefficient arrays (35 entries for a
// 3-form on R^7, indexed by masks_of_degree(7, 3)). Templated on the scalar
// so the same code yields values (double) and directional derivatives (Dual).

#include <array>
#include <bit>
#include <type_traits>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "g2cy/alt_form.hpp"
#include "g2cy/scalar.hpp"

namespace g2cy {

class G2KernelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace kernel {

inline const std::vector<Mask>& masks3() {
  static const std::vector<Mask> m = masks_of_degree(7, 3);
  return m;
}
inline const std::vector<Mask>& masks4() {
  static const std::vector<Mask> m = masks_of_degree(7, 4);
  return m;
}
inline int index_of(const std::vector<Mask>& list, Mask m) {
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i] == m) return static_cast<int>(i);
  return -1;
}

struct BTerm {
  int i, j, a, b, c;
  double sign;
};

// B_ij = sum sign * phi_a phi_b phi_c, the coefficient of e_0..6 in
// i_{e_i} phi ^ i_{e_j} phi ^ phi.
inline const std::vector<BTerm>& b_terms() {
  static const std::vector<BTerm> terms = [] {
    std::vector<BTerm> out;
    const auto& m3 = masks3();
    const Mask full = (Mask(1) << 7) - 1;
    for (int i = 0; i < 7; ++i)
      for (int j = i; j < 7; ++j)
        for (int a = 0; a < 35; ++a) {
          Mask ma = m3[static_cast<std::size_t>(a)];
          if (!(ma >> i & 1)) continue;
          // i_{e_i} e_ma = sign * e_{ma \ i}
          int sa = (std::popcount(ma & ((Mask(1) << i) - 1)) % 2) ? -1 : 1;
          Mask ra = ma & ~(Mask(1) << i);
          for (int b = 0; b < 35; ++b) {
            Mask mb = m3[static_cast<std::size_t>(b)];
            if (!(mb >> j & 1)) continue;
            int sb = (std::popcount(mb & ((Mask(1) << j) - 1)) % 2) ? -1 : 1;
            Mask rb = mb & ~(Mask(1) << j);
            if (ra & rb) continue;
            Mask rest = full & ~(ra | rb);
            if (std::popcount(rest) != 3) continue;
            int c = index_of(m3, rest);
            int s = sa * sb * wedge_sign(ra, rb) * wedge_sign(ra | rb, rest);
            out.push_back({i, j, a, b, c, static_cast<double>(s)});
          }
        }
    return out;
  }();
  return terms;
}

// Complement table: for each 3-mask I, the 4-mask J = complement and the
// sign with e_I ^ e_J = sign * e_0..6.
struct Complement {
  int j;
  double sign;
};
inline const std::array<Complement, 35>& complements() {
  static const std::array<Complement, 35> t = [] {
    std::array<Complement, 35> out{};
    const Mask full = (Mask(1) << 7) - 1;
    const auto& m3 = masks3();
    for (int a = 0; a < 35; ++a) {
      Mask mi = m3[static_cast<std::size_t>(a)];
      Mask mj = full & ~mi;
      out[static_cast<std::size_t>(a)] = {index_of(masks4(), mj), static_cast<double>(wedge_sign(mi, mj))};
    }
    return out;
  }();
  return t;
}

template <class T>
T det7(std::array<T, 49> a) {
  T det(1);
  for (int c = 0; c < 7; ++c) {
    int p = c;
    for (int r = c + 1; r < 7; ++r)
      if (std::abs(to_double(a[static_cast<std::size_t>(r * 7 + c)])) > std::abs(to_double(a[static_cast<std::size_t>(p * 7 + c)]))) p = r;
    if (to_double(a[static_cast<std::size_t>(p * 7 + c)]) == 0.0) return T(0);
    if (p != c) {
      for (int k = 0; k < 7; ++k) std::swap(a[static_cast<std::size_t>(p * 7 + k)], a[static_cast<std::size_t>(c * 7 + k)]);
      det = -det;
    }
    const T piv = a[static_cast<std::size_t>(c * 7 + c)];
    det = det * piv;
    for (int r = c + 1; r < 7; ++r) {
      T f = a[static_cast<std::size_t>(r * 7 + c)] / piv;
      for (int k = c; k < 7; ++k) a[static_cast<std::size_t>(r * 7 + k)] = a[static_cast<std::size_t>(r * 7 + k)] - f * a[static_cast<std::size_t>(c * 7 + k)];
    }
  }
  return det;
}

template <class T>
std::array<T, 49> inverse7(const std::array<T, 49>& m) {
  std::array<T, 98> a{};
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 7; ++c) {
      a[static_cast<std::size_t>(r * 14 + c)] = m[static_cast<std::size_t>(r * 7 + c)];
      a[static_cast<std::size_t>(r * 14 + 7 + c)] = T(r == c ? 1.0 : 0.0);
    }
  for (int c = 0; c < 7; ++c) {
    int p = c;
    for (int r = c + 1; r < 7; ++r)
      if (std::abs(to_double(a[static_cast<std::size_t>(r * 14 + c)])) > std::abs(to_double(a[static_cast<std::size_t>(p * 14 + c)]))) p = r;
    if (p != c)
      for (int k = 0; k < 14; ++k) std::swap(a[static_cast<std::size_t>(p * 14 + k)], a[static_cast<std::size_t>(c * 14 + k)]);
    const T piv = a[static_cast<std::size_t>(c * 14 + c)];
    for (int k = 0; k < 14; ++k) a[static_cast<std::size_t>(c * 14 + k)] = a[static_cast<std::size_t>(c * 14 + k)] / piv;
    for (int r = 0; r < 7; ++r) {
      if (r == c) continue;
      T f = a[static_cast<std::size_t>(r * 14 + c)];
      for (int k = 0; k < 14; ++k) a[static_cast<std::size_t>(r * 14 + k)] = a[static_cast<std::size_t>(r * 14 + k)] - f * a[static_cast<std::size_t>(c * 14 + k)];
    }
  }
  std::array<T, 49> out{};
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 7; ++c) out[static_cast<std::size_t>(r * 7 + c)] = a[static_cast<std::size_t>(r * 14 + 7 + c)];
  return out;
}

inline double pow_real(double x, double e) { return std::pow(x, e); }
inline Dual pow_real(const Dual& x, double e) {
  double v = std::pow(x.v, e);
  return {v, e * v / x.v * x.d};
}

}  // namespace kernel

/// Metric, volume density and dual 4-form of a 3-form given by 35 coefficients.
template <class T>
struct G2Point {
  std::array<T, 49> g;
  std::array<T, 49> ginv;
  T sqrt_det;           // vol_g = sqrt_det * e_0..6
  std::array<T, 35> dual;  // coefficients of *phi on masks_of_degree(7, 4)
};

template <class T>
G2Point<T> g2_point(const std::array<T, 35>& phi) {
  G2Point<T> out;
  std::array<T, 49> B{};
  for (auto& x : B) x = T(0.0);
  for (const auto& t : kernel::b_terms()) {
    T v = phi[static_cast<std::size_t>(t.a)] * phi[static_cast<std::size_t>(t.b)] * phi[static_cast<std::size_t>(t.c)];
    B[static_cast<std::size_t>(t.i * 7 + t.j)] = B[static_cast<std::size_t>(t.i * 7 + t.j)] + T(t.sign) * v;
  }
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < i; ++j) B[static_cast<std::size_t>(i * 7 + j)] = B[static_cast<std::size_t>(j * 7 + i)];
  // B = 6 sqrt(det g) g, so det B = 6^7 det(g)^{9/2}
  T detB = kernel::det7(B);
  if (!(to_double(detB) > 0.0)) throw G2KernelError("3-form is not positive (det B <= 0)");
  if (!(to_double(B[0]) > 0.0)) throw G2KernelError("3-form is not positive (B not positive)");
  T detg = kernel::pow_real(T(detB / T(std::pow(6.0, 7))), 2.0 / 9.0);
  out.sqrt_det = kernel::pow_real(detg, 0.5);
  const T scale = T(1.0) / (T(6.0) * out.sqrt_det);
  for (int k = 0; k < 49; ++k) out.g[static_cast<std::size_t>(k)] = B[static_cast<std::size_t>(k)] * scale;
  out.ginv = kernel::inverse7(out.g);
  // raise: phi^{abc} = sum_{ijk} det(ginv[abc; ijk]) phi_ijk
  const auto& m3 = kernel::masks3();
  std::array<std::array<int, 3>, 35> idx{};
  for (int a = 0; a < 35; ++a) {
    auto v = indices_of(m3[static_cast<std::size_t>(a)]);
    idx[static_cast<std::size_t>(a)] = {v[0], v[1], v[2]};
  }
  const auto& G = out.ginv;
  auto at = [&](int r, int c) -> const T& { return G[static_cast<std::size_t>(r * 7 + c)]; };
  std::array<T, 35> raised{};
  for (int a = 0; a < 35; ++a) {
    const auto& r = idx[static_cast<std::size_t>(a)];
    T acc(0.0);
    for (int b = 0; b < 35; ++b) {
      const T& pb = phi[static_cast<std::size_t>(b)];
      if (to_double(pb) == 0.0 && [&] {
            if constexpr (std::is_same_v<T, Dual>) return pb.d == 0.0;
            else return true;
          }())
        continue;
      const auto& c = idx[static_cast<std::size_t>(b)];
      T m = at(r[0], c[0]) * (at(r[1], c[1]) * at(r[2], c[2]) - at(r[1], c[2]) * at(r[2], c[1])) -
            at(r[0], c[1]) * (at(r[1], c[0]) * at(r[2], c[2]) - at(r[1], c[2]) * at(r[2], c[0])) +
            at(r[0], c[2]) * (at(r[1], c[0]) * at(r[2], c[1]) - at(r[1], c[1]) * at(r[2], c[0]));
      acc = acc + m * pb;
    }
    raised[static_cast<std::size_t>(a)] = acc;
  }
  // (*phi) = sqrt_det * sum_I phi^I i_{e_I} vol; i_{e_I} e_0..6 = sign(I, J) e_J
  for (auto& x : out.dual) x = T(0.0);
  const auto& comp = kernel::complements();
  for (int a = 0; a < 35; ++a) {
    const auto& c = comp[static_cast<std::size_t>(a)];
    out.dual[static_cast<std::size_t>(c.j)] = raised[static_cast<std::size_t>(a)] * out.sqrt_det * T(c.sign);
  }
  return out;
}

/// Packs a 3-form into the kernel layout.
template <class S>
std::array<double, 35> pack3(const AltForm<S>& a) {
  if (a.dim() != 7 || a.degree() != 3) throw DimensionError("pack3 needs a 3-form on R^7");
  std::array<double, 35> out{};
  const auto& m3 = kernel::masks3();
  for (int i = 0; i < 35; ++i) out[static_cast<std::size_t>(i)] = to_double(a.coeff(m3[static_cast<std::size_t>(i)]));
  return out;
}

inline AltForm<double> unpack(const std::array<double, 35>& c, int degree) {
  const auto& ms = degree == 3 ? kernel::masks3() : kernel::masks4();
  AltForm<double> out(7, degree);
  for (int i = 0; i < 35; ++i) out.add(ms[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace g2cy
