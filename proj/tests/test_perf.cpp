#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "swipt/perf.hpp"

using namespace swipt;
using namespace swipt::perf;
using std::numbers::pi;

namespace {

ScenarioConfig isotropic() {
  ScenarioConfig c;
  c.radio.side_loss_override.reset();
  c.radio.gain = 1.0;
  return c;
}

}  // namespace

TEST_CASE("capacity") {
  RadioParams radio;
  CHECK(capacity(200.0, 0.0, 10.0, 0.0, radio) == 0.0);

  double prev = capacity(200.0, 5.0, 10.0, 0.0, radio);
  for (double i = 1e-15; i < 1e12; i *= 10) {
    const double c = capacity(200.0, 5.0, 10.0, i, radio);
    CHECK(c < prev);
    prev = c;
  }
  CHECK(prev < 1e-3);

  // Extended-precision reference for B=50 MHz, k=3, alpha=3, G=10, P=5 W, r=200 m.
  const long double band = 50e6L / 3.0L;
  const long double noise = 3.981e-21L * band;
  const long double signal = 5.0L * 10.0L / (200.0L * 200.0L * 200.0L);
  const long double reference = band * std::log2l(1.0L + signal / noise);
  CHECK(std::abs(capacity(200.0, 5.0, 10.0, 0.0, radio) / static_cast<double>(reference) - 1.0) < 1e-13);
}

TEST_CASE("mean interference") {
  auto c = isotropic();
  c.radio.tx_power = 5.0;
  c.population.lambda_b = 1e-5;
  const auto s = validate(c);
  CHECK(mean_interference(100.0, s, 0.0) == 0.0);
  CHECK(mean_interference(100.0, s, 1.0) == doctest::Approx(5.0 * 1e-5 * 2 * pi * 1e-2 / 3.0));
  CHECK(mean_interference(100.0, s, 1.0) == doctest::Approx(1.047e-6).epsilon(1e-3));
  c.radio.reuse = 6;
  CHECK(mean_interference(100.0, validate(c), 1.0) == doctest::Approx(0.5 * mean_interference(100.0, s, 1.0)));
}

TEST_CASE("mean user power") {
  ScenarioConfig c;
  c.population.lambda_b = 1e-5;
  const auto s = validate(c);
  CHECK(mean_user_power(s, 0.0) == 0.0);
  CHECK(mean_user_power(s, 1.0) == doctest::Approx(0.2 * 1e-5 * 3 * pi));
  CHECK(mean_user_power(s, 1.0) == doctest::Approx(1.885e-5).epsilon(1e-3));

  c.population.iot_fraction = 0.0;
  c.scheduling.p_bb = 0.35;
  c.radio.alpha = 3.5;
  CHECK(mean_user_power(validate(c), 0.6) == doctest::Approx(0.35 * 1e-5 * pi * 3.5 / 1.5 * 0.6));
}

TEST_CASE("mean user power does not depend on user density") {
  ScenarioConfig c;
  const double base = mean_user_power(validate(c), 0.4);
  for (double lu : {1e-4, 1e-2, 0.3}) {
    c.population.lambda_u = lu;
    CHECK(mean_user_power(validate(c), 0.4) == base);
  }
}

TEST_CASE("H operator scaling") {
  const auto s = validate(ScenarioConfig{});
  const geometry::KernelTable kernel(s.population().lambda_b);
  const std::function<double(double)> g = [](double) { return 2e6; };
  const std::function<double(double)> g2 = [](double) { return 4e6; };
  const double h = h_operator(0.5, 1.0, g, s, kernel);
  CHECK(h > 0.0);
  CHECK(h_operator(0.5, 2.0, g, s, kernel) == doctest::Approx(0.5 * h));
  CHECK(h_operator(0.5, 1.0, g2, s, kernel) == doctest::Approx(0.5 * h));
  // With constant g, H = f-weight * E[J(r)] / (z c) and E[J(r)] over the
  // serving-distance law is the mean cell population per unit density.
  const auto& pop = s.population();
  const double users = pop.lambda_u * (0.5 + pop.iot_fraction * (pop.duty_cycle - 0.5));
  const double mean_j = integrate(
      [&](double r) { return kernel(r) * 2 * pi * pop.lambda_b * r * std::exp(-pi * pop.lambda_b * r * r); }, 0.0,
      geometry::truncation_radius(pop.lambda_b, 40.0), 1e-10, "E[J]");
  CHECK(h == doctest::Approx(users * mean_j / 2e6).epsilon(1e-6));
}

TEST_CASE("H fixed rule agrees with adaptive quadrature on the downlink integrand") {
  for (double lu : {1e-3, 1e-2}) {
    ScenarioConfig c;
    c.population.lambda_u = lu;
    const auto s = validate(c);
    const geometry::KernelTable kernel(s.population().lambda_b);
    const auto& radio = s.radio();
    const std::function<double(double)> rate = [&](double r) {
      return capacity(r, radio.tx_power, radio.gain, mean_interference(r, s, 0.3), radio);
    };
    const double fixed = h_operator(50.0, 50.0, rate, s, kernel);
    const double adaptive = h_operator_adaptive(50.0, 50.0, rate, s, kernel, 1e-10);
    CHECK(std::abs(fixed / adaptive - 1.0) < 1e-4);
  }
}

TEST_CASE("fair downlink weight") {
  ScenarioConfig c;
  c.mode = {EhModeKind::ts, 0.0};
  CHECK(fair_weight(validate(c)) == c.scheduling.delta_d);
  c.mode = {EhModeKind::ts, 0.3};
  CHECK(fair_weight(validate(c)) == doctest::Approx(0.7 * c.scheduling.delta_d));
  c.mode = {EhModeKind::sps, 0.0};
  CHECK(fair_weight(validate(c)) == doctest::Approx(c.scheduling.delta_d));
  c.mode = {EhModeKind::sps, 0.5};
  CHECK(fair_weight(validate(c)) < c.scheduling.delta_d);
  c.scheduling.w_d = 3.0;
  CHECK(downlink_weight(validate(c)) == 3.0);
}

TEST_CASE("downlink fixed point") {
  ScenarioConfig c;
  const auto s = validate(c);
  const geometry::KernelTable kernel(s.population().lambda_b);
  const auto d = solve_downlink_delay(s, kernel);
  CHECK(d.tau_d > 0.0);
  const double tol = s.numerics().fp_tol_factor * s.qos().tau_d0;
  CHECK(std::abs(downlink_map(d.tau_d, downlink_weight(s), s, kernel) - d.tau_d) < tol);

  // T is increasing in tau.
  double prev = 0.0;
  for (double t = 0.0; t <= 4 * c.qos.tau_d0; t += 0.25 * c.qos.tau_d0) {
    const double v = downlink_map(t, downlink_weight(s), s, kernel);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("fixed point converges across the contraction region") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    ScenarioConfig c;
    c.radio.p_max = 20.0;
    c.radio.tx_power = 1.0 + 19.0 * u(rng);
    c.population.lambda_b = std::pow(10.0, -5 + 3 * u(rng));
    c.population.lambda_u = 10 * c.population.lambda_b;
    const auto rep = evaluate(validate(c));
    CHECK(rep.converged);
    CHECK(rep.tau_d > 0.0);
    CHECK(rep.tau_u > 0.0);
  }
}

TEST_CASE("BB and IoT delay relations") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 25; ++i) {
    const auto s = validate(test::random_scenario(rng, EhModeKind::ts));
    const auto rep = evaluate(s);
    CHECK(rep.tau_dI == rep.tau_d * rep.w_d / (1.0 - s.mode().split));
    CHECK(rep.tau_uI == s.scheduling().delta_u * rep.tau_u);
  }
  for (auto kind : {EhModeKind::sps, EhModeKind::dps}) {
    const auto s = validate(test::random_scenario(rng, kind));
    const auto rep = evaluate(s);
    CHECK(rep.tau_uI == s.scheduling().delta_u * rep.tau_u);
  }
}

TEST_CASE("all-IoT TS without time switching") {
  ScenarioConfig c;
  c.population.iot_fraction = 1.0;
  c.population.duty_cycle = 1.0;
  c.mode = {EhModeKind::ts, 0.0};
  c.scheduling.w_d = c.scheduling.delta_d;
  const auto rep = evaluate(validate(c));
  CHECK(rep.tau_dI == doctest::Approx(rep.tau_d * c.scheduling.delta_d));
}

TEST_CASE("uplink delay") {
  ScenarioConfig c;
  c.scheduling.delta_u = 1.0;
  auto rep = evaluate(validate(c));
  CHECK(rep.tau_uI == rep.tau_u);
  const double before = rep.tau_u;
  c.scheduling.p_iot *= 0.5;
  rep = evaluate(validate(c));
  CHECK(rep.tau_u > before);
}

TEST_CASE("SPS without splitting coincides with TS without switching") {
  ScenarioConfig c;
  c.scheduling.w_d = 40.0;
  c.mode = {EhModeKind::ts, 0.0};
  const auto ts = evaluate(validate(c));
  c.mode = {EhModeKind::sps, 0.0};
  const auto sps = evaluate(validate(c));
  CHECK(sps.tau_d == ts.tau_d);
  CHECK(sps.tau_dI == doctest::Approx(ts.tau_dI).epsilon(1e-12));
}

TEST_CASE("utilizations are reported uncapped") {
  ScenarioConfig c;
  c.qos.tau_u0 = 1e-12;
  const auto rep = evaluate(validate(c));
  CHECK(rep.util_u > 1.0);
  CHECK(rep.util_u == rep.tau_u / c.qos.tau_u0);
  // O-bar saturates at full uplink activity.
  CHECK(rep.user_power == mean_user_power(validate(c), 1.0));
}
