#include <cmath>
#include <random>

#include "doctest.h"
#include "swipt/objective.hpp"

using namespace swipt;
using namespace swipt::objective;

namespace {

perf::PerformanceReport report(double util_d, double util_u) {
  perf::PerformanceReport p;
  p.util_d = util_d;
  p.util_u = util_u;
  return p;
}

Evaluation evaluation(const ValidatedScenario& s, double util_d, double util_u, double cdf) {
  Evaluation e;
  e.perf = report(util_d, util_u);
  e.cdf_h = cdf;
  e.feasibility = check_feasibility(s, e.perf, cdf);
  e.objective = e.feasibility.objective;
  return e;
}

}  // namespace

TEST_CASE("objective value") {
  ScenarioConfig c;
  c.population.lambda_b = 1e-6;
  c.radio.tx_power = 11.0;
  c.energy = BsEnergyModel::llp();
  const auto s = validate(c);
  CHECK(objective_value(s, report(0.0, 0.0)) == doctest::Approx(1e-6 * 1100.0));
  CHECK(objective_value(s, report(1.0, 0.0)) == doctest::Approx(1500e-6));
  CHECK(objective_value(s, report(1.0, 0.0)) * 1e6 == doctest::Approx(1500.0));

  double prev = 0.0;
  for (double lb : {1e-6, 1e-5, 1e-4, 1e-3}) {
    c.population.lambda_b = lb;
    const double v = objective_value(validate(c), report(0.3, 0.0));
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("feasibility slacks") {
  ScenarioConfig c;
  c.population.lambda_u = 2e-4;
  c.population.lambda_b = 1e-4;
  auto s = validate(c);
  auto f = check_feasibility(s, report(0.5, 0.5), 0.01);
  CHECK(f.users_per_bs == doctest::Approx(5.0 - 2.0));
  CHECK_FALSE(f.feasible);

  c.population.lambda_u = 1e-2;
  s = validate(c);
  f = check_feasibility(s, report(0.5, 0.5), 0.01);
  CHECK(f.feasible);
  CHECK(f.c1_dl == doctest::Approx(-0.5));
  CHECK(f.c4 == doctest::Approx(0.01 - 0.05));

  CHECK_FALSE(check_feasibility(s, report(1.2, 0.5), 0.01).feasible);
  CHECK_FALSE(check_feasibility(s, report(0.5, 1.2), 0.01).feasible);
  CHECK_FALSE(check_feasibility(s, report(0.5, 0.5), 0.2).feasible);

  c.qos.mu = 1.0;
  s = validate(c);
  for (double cdf : {0.0, 0.5, 1.0}) CHECK(check_feasibility(s, report(0.5, 0.5), cdf).c4 <= 0.0);
}

TEST_CASE("penalty fitness") {
  ScenarioConfig c;
  c.population.lambda_u = 1e-2;
  const auto s = validate(c);
  const FitnessWeights w;
  CHECK(w.k1 == 1000.0);
  CHECK(w.k2 == 5000.0);
  CHECK(w.k3 == 1000.0);

  const auto feasible = evaluation(s, 0.5, 0.5, 0.01);
  CHECK(fitness(feasible, s, w) == feasible.objective);

  const auto uplink = evaluation(s, 0.5, 1.5, 0.01);
  CHECK(fitness(uplink, s, w) == doctest::Approx(uplink.objective + 500.0));
  const auto downlink = evaluation(s, 1.25, 0.5, 0.01);
  CHECK(fitness(downlink, s, w) == doctest::Approx(downlink.objective + 250.0));
  const auto outage = evaluation(s, 0.5, 0.5, 0.15);
  CHECK(fitness(outage, s, w) == doctest::Approx(outage.objective + 5000.0 * 0.1));

  // The printed sign rewards violations and charges slack instead.
  FitnessWeights verbatim;
  verbatim.sign = PenaltySign::verbatim;
  CHECK(fitness(outage, s, verbatim) == doctest::Approx(outage.objective));
  CHECK(fitness(feasible, s, verbatim) == doctest::Approx(feasible.objective + 5000.0 * 0.04));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const auto e = evaluation(s, u(rng), u(rng), 0.5 * u(rng));
    CHECK(fitness(e, s, w) >= e.objective);
    if (e.feasibility.feasible) CHECK(fitness(e, s, w) == e.objective);
  }
}

TEST_CASE("penalty scale is the largest objective value") {
  ScenarioConfig c;
  c.energy = BsEnergyModel::hlp();
  CHECK(penalty_scale(c) == 1e-2 * (482.3 + 48.23 + 144.69 * 10.0));
  c.population.lambda_b = c.population.lambda_b_max;
  c.radio.tx_power = c.radio.p_max;
  CHECK(objective_value(validate(c), report(1.0, 0.0)) == doctest::Approx(penalty_scale(c)));
  CHECK(failure_score(c) > penalty_scale(c));
}

TEST_CASE("decision box") {
  ScenarioConfig c;
  c.population.lambda_u = 1e-3;
  const DecisionBox box(c);
  CHECK(box.lambda_hi() == doctest::Approx(2e-4));
  CHECK(box.lambda_lo() == doctest::Approx(2e-7));

  const auto lo = box.decode({0, 0, 0});
  const auto hi = box.decode({1, 1, 1});
  CHECK(lo.tx_power == c.radio.p_min);
  CHECK(hi.tx_power == c.radio.p_max);
  CHECK(lo.lambda_b == doctest::Approx(box.lambda_lo()));
  CHECK(hi.lambda_b == doctest::Approx(box.lambda_hi()));
  CHECK(hi.split == 1.0);
  // Out-of-box genes are clamped on decode.
  CHECK(box.decode({-3, 2, 7}) == box.decode({0, 1, 1}));

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const std::array<double, 3> g{u(rng), u(rng), u(rng)};
    const auto back = box.encode(box.decode(g));
    for (int k = 0; k < 3; ++k) CHECK(back[k] == doctest::Approx(g[k]).epsilon(1e-12));
  }
  c.population.lambda_u = 1.0;
  CHECK(DecisionBox(c).lambda_hi() == c.population.lambda_b_max);
}

TEST_CASE("fitness at a decision") {
  ScenarioConfig c;
  c.population.lambda_u = 1e-2;
  const auto r = fitness_at(c, {11.0, 2e-3, 0.9996}, {});
  REQUIRE(r.evaluation);
  CHECK(r.error.empty());
  CHECK(r.score == fitness(*r.evaluation, validate(apply(c, {11.0, 2e-3, 0.9996})), {}));

  // A decision the model cannot evaluate gets the failure score, not an exception.
  c.scheduling.w_d.reset();
  const auto bad = fitness_at(c, {11.0, 2e-3, 1.0}, {});
  CHECK_FALSE(bad.evaluation);
  CHECK_FALSE(bad.error.empty());
  CHECK(bad.score == failure_score(c));
}

TEST_CASE("feasible optimum region satisfies every constraint") {
  ScenarioConfig c;
  c.population.lambda_u = 1e-2;
  c.energy = BsEnergyModel::llp();
  const auto e = evaluate(validate(apply(c, {11.0, 2e-3, 0.9996})));
  CHECK(e.feasibility.feasible);
  CHECK(e.cdf_h <= c.qos.mu);
  CHECK(e.objective == doctest::Approx(
                           2e-3 * (1100.0 + e.perf.util_d * (100.0 + 30.0 * 10.0))));
}
