#pragma once

// Circle-invariant SU(3) data on a flat T^6 x S^1 grid with prescribed
// closedness of Omega, omega and z. The base frame is a random constant
// GL+(6) pullback of the standard structure; non-closedness is switched on
// separately by a phase on Omega, an SL(3,C) scaling on omega and a
// non-closed term in z.

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "g2cy/correspondence.hpp"
#include "g2cy/grid.hpp"
#include "g2cy/random.hpp"
#include "g2cy/su3.hpp"

namespace g2cy::testing {

struct DictionaryInstance {
  bool dz = false, dOmega = false, domega = false;  // prescribed non-closedness
  GridForm re, im, omega, z, phi;
};

inline DictionaryInstance dictionary_instance(Rng& rng, bool dz, bool dOmega, bool domega, int points = 16) {
  std::uniform_int_distribution<int> slot(1, 6);
  std::uniform_real_distribution<double> amp(0.1, 0.3);
  // three active directions shared by all ingredients
  std::set<int> used;
  while (used.size() < 3) used.insert(slot(rng));
  std::vector<int> dirs(used.begin(), used.end());
  std::uniform_int_distribution<std::size_t> pick(0, 2);
  GridSpec s;
  s.length.fill(2 * std::numbers::pi);
  for (int d : dirs) s.n[static_cast<std::size_t>(d)] = points;

  const Matrix<double> G = random_gl_plus<double>(rng, 6, 0.2);
  const int ja = dirs[pick(rng)], jsig = dirs[pick(rng)], jf = dirs[pick(rng)];
  int jg = dirs[pick(rng)], jleg = dirs[pick(rng)];
  while (jleg == jg) jleg = dirs[pick(rng)];
  const double ea = amp(rng), esig = amp(rng), ef = amp(rng), eg = amp(rng);
  const double L = 0.5 + amp(rng) * 5.0;
  AltForm<double> h(7, 1);
  for (int j = 1; j < 7; ++j) h.add(Mask(1) << j, std::uniform_real_distribution<double>(-0.3, 0.3)(rng));

  DictionaryInstance out;
  out.dz = dz;
  out.dOmega = dOmega;
  out.domega = domega;
  out.re = GridForm(s, 3);
  out.im = GridForm(s, 3);
  out.omega = GridForm(s, 2);
  out.z = GridForm(s, 1);
  out.phi = GridForm(s, 3);
  const auto std3 = standard_su3<double>();
  for (std::size_t p = 0; p < s.size(); ++p) {
    const auto x = s.point(p);
    auto at = [&](int j) { return x[static_cast<std::size_t>(j)]; };
    // omega: (D G)^* with D = diag(a, a, 1/a, 1/a, 1, 1), which fixes Omega
    const double a = domega ? std::exp(ea * std::sin(at(ja))) : 1.0;
    Matrix<double> D = Matrix<double>::identity(6);
    D(0, 0) = D(1, 1) = a;
    D(2, 2) = D(3, 3) = 1.0 / a;
    auto su = pullback_su3(D * G, std3);
    if (dOmega) {
      const double sg = esig * std::cos(at(jsig));
      auto re = su.re * std::cos(sg) - su.im * std::sin(sg);
      auto im = su.re * std::sin(sg) + su.im * std::cos(sg);
      su.re = re;
      su.im = im;
    }
    // z = L dtheta + h + df, plus g dx_leg with g varying along another direction
    AltForm<double> z = AltForm<double>::monomial(7, {0}, L) + h + AltForm<double>::monomial(7, {jf}, ef * std::cos(at(jf)));
    if (dz) z += AltForm<double>::monomial(7, {jleg}, eg * std::sin(at(jg)));
    out.re.set(p, lift_from_v(su.re));
    out.im.set(p, lift_from_v(su.im));
    out.omega.set(p, lift_from_v(su.omega));
    out.z.set(p, z);
    out.phi.set(p, assemble_phi(Twisting<double>(z), su));
  }
  return out;
}

}  // namespace g2cy::testing
