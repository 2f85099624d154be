#pragma once

#include <random>

#include "swipt/core.hpp"

namespace swipt::test {

// A valid scenario with every continuous parameter drawn at random inside
// ranges the model is meant to handle.
inline ScenarioConfig random_scenario(std::mt19937_64& rng, EhModeKind kind) {
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto log_u = [&](double lo, double hi) { return std::exp(u(std::log(lo), std::log(hi))); };
  ScenarioConfig c;
  c.radio.alpha = u(2.5, 4.0);
  c.radio.tx_power = u(1.0, 11.0);
  c.radio.gain = u(2.0, 20.0);
  c.population.lambda_b = log_u(1e-5, 1e-3);
  c.population.lambda_u = c.population.lambda_b * u(5.0, 200.0);
  c.population.iot_fraction = u(0.1, 0.9);
  c.population.duty_cycle = u(0.2, 1.0);
  c.scheduling.delta_d = u(1.0, 200.0);
  c.scheduling.delta_u = u(0.5, 5.0);
  c.qos.tau_d0 = 1e-3;
  c.mode = {kind, u(0.05, 0.95)};
  return c;
}

}  // namespace swipt::test
