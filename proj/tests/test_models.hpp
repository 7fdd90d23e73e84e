#pragma once

#include <random>
#include <string>
#include <vector>

#include "levyexit/model_spec.hpp"

namespace testmodels {

using levyexit::LevyModelSpec;

struct Named {
  std::string name;
  LevyModelSpec spec;
};

/// Brownian motion, unit volatility, killed at rate 1.
inline LevyModelSpec model_a() { return {1.0, 0.0, 1.0, {}, {}}; }

/// Kou-type: one exponential jump family on each side.
inline LevyModelSpec model_b() { return {0.2, 0.05, 0.04, {{30.0, 10.0}}, {{30.0, 15.0}}}; }

/// Bounded variation with negative drift: no upward creeping, m = n.
inline LevyModelSpec model_bv_down() { return {0.0, -0.5, 0.3, {{4.0, 3.0}}, {{2.0, 5.0}}}; }

/// Bounded variation with positive drift and two upward families.
inline LevyModelSpec model_bv_up() { return {0.0, 0.5, 0.3, {{4.0, 3.0}, {2.0, 7.0}}, {{2.0, 5.0}}}; }

/// Mirror-symmetric jump diffusion.
inline LevyModelSpec model_sym() { return {0.3, 0.0, 0.2, {{5.0, 8.0}}, {{5.0, 8.0}}}; }

/// Two-family model with distinct random rates; deterministic for a given seed.
inline LevyModelSpec random_model(unsigned seed) {
  std::mt19937 g(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  LevyModelSpec s;
  s.sigma = 0.1 + 0.4 * U(g);
  s.mu = -0.2 + 0.4 * U(g);
  s.kill_q = 0.05 + 0.45 * U(g);
  const int np = 1 + static_cast<int>(2 * U(g)), nn = 1 + static_cast<int>(2 * U(g));
  double r = 2.0;
  for (int i = 0; i < np; ++i) s.pos_jumps.push_back({1.0 + 10.0 * U(g), r += 1.0 + 6.0 * U(g)});
  r = 2.0;
  for (int i = 0; i < nn; ++i) s.neg_jumps.push_back({1.0 + 10.0 * U(g), r += 1.0 + 6.0 * U(g)});
  return s;
}

/// Killed models used across the property tests.
inline std::vector<Named> killed_models() {
  return {{"gaussian", model_a()},      {"kou", model_b()},
          {"bv_down", model_bv_down()}, {"bv_up", model_bv_up()},
          {"symmetric", model_sym()},   {"random_1", random_model(11)},
          {"random_2", random_model(23)}};
}

/// Unkilled models whose upward factor vanishes at 0 (the process does not drift to +inf).
inline std::vector<Named> unkilled_not_drifting_up() {
  return {{"gaussian_down", {1.0, -0.3, 0.0, {}, {}}},
          {"bv_down_q0", {0.0, -0.5, 0.0, {{4.0, 3.0}}, {{2.0, 5.0}}}},
          {"jd_down_q0", {0.3, -0.5, 0.0, {{4.0, 3.0}}, {{2.0, 5.0}, {1.0, 9.0}}}}};
}

/// Risk-neutral drift so that E e^{X_1} = 1.
inline LevyModelSpec risk_neutral(LevyModelSpec s) {
  double comp = 0.0;
  for (const auto& j : s.pos_jumps) comp += j.weight * (1.0 / (j.rate - 1.0) - 1.0 / j.rate);
  for (const auto& j : s.neg_jumps) comp += j.weight * (1.0 / (j.rate + 1.0) - 1.0 / j.rate);
  s.mu = -0.5 * s.sigma * s.sigma - comp;
  return s;
}

}  // namespace testmodels
