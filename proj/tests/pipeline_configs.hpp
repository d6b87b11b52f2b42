#pragma once

#include "g2cy/pipeline.hpp"

namespace g2cy::testing {

inline PerturbationSpec perturbation(std::string target, int side, std::vector<int> mode, bool cosine, int power, int rate,
                                     std::vector<int> primitive, Rational amplitude = ratio<Rational>(1, 50)) {
  PerturbationSpec p;
  p.target = std::move(target);
  p.side = side;
  p.mode = std::move(mode);
  p.cosine = cosine;
  p.power = power;
  p.rate = Rational(rate);
  p.amplitude = amplitude;
  p.primitive = std::move(primitive);
  return p;
}

// Exponentially small perturbations of both SU(3) pieces, modes in x1 and x2.
inline GluingConfig perturbed_config() {
  GluingConfig c;
  c.perturbations = {
      perturbation("re_omega", 1, {1, 0, 0, 0, 0}, true, 0, 1, {2, 3}),
      perturbation("im_omega", 1, {0, 1, 0, 0, 0}, false, 1, 1, {1, 4}),
      perturbation("omega", 2, {1, 0, 0, 0, 0}, true, 0, 1, {5}),
      perturbation("omega", 1, {0, 1, 0, 0, 0}, true, 1, 2, {3}),
  };
  return c;
}

// Same SU(3) data with a harmonic twisting part h = dx2 / 10 and exact parts df_i.
inline GluingConfig twisted_config() {
  auto c = perturbed_config();
  c.harmonic_v = {Rational(0), ratio<Rational>(1, 10), Rational(0), Rational(0), Rational(0)};
  c.perturbations.push_back(perturbation("f", 1, {1, 0, 0, 0, 0}, false, 1, 1, {}));
  c.perturbations.push_back(perturbation("f", 2, {0, 1, 0, 0, 0}, false, 1, 1, {}));
  return c;
}

}  // namespace g2cy::testing
