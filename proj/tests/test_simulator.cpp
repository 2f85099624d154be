#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "swipt/perf.hpp"
#include "swipt/simulator.hpp"

using namespace swipt;
using namespace swipt::sim;

namespace {

constexpr double ticks = 4294967296.0;

Point at_metres(double side, double x, double y) {
  return {static_cast<std::uint32_t>(std::llround(x / side * ticks)),
          static_cast<std::uint32_t>(std::llround(y / side * ticks))};
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

void check_identical(const ReplicationSummary& a, const ReplicationSummary& b) {
  CHECK(a.bs == b.bs);
  CHECK(a.users == b.users);
  CHECK(a.active_iot == b.active_iot);
  for (auto [x, y] : {std::pair{a.tau_d, b.tau_d}, {a.tau_dI, b.tau_dI}, {a.tau_u, b.tau_u},
                      {a.tau_uI, b.tau_uI}, {a.util_d, b.util_d}, {a.util_u, b.util_u}})
    CHECK(same_bits(x, y));
  REQUIRE(a.cdf.size() == b.cdf.size());
  for (std::size_t i = 0; i < a.cdf.size(); ++i) CHECK(same_bits(a.cdf[i], b.cdf[i]));
}

ScenarioConfig small() {
  ScenarioConfig c;
  c.population.lambda_u = 2e-3;
  c.population.lambda_b = 1e-4;
  return c;
}

}  // namespace

TEST_CASE("translation on the torus leaves every statistic bit-identical") {
  const auto s = validate(small());
  std::mt19937_64 rng(5);
  const auto r = draw_realization(s, 1000.0, rng);
  SimConfig sim;
  sim.harvest_grid = {1e-5, 1e-4, 1e-3};
  const auto base = measure(s, r, sim);
  for (Point shift : {Point{123456789u, 987654321u}, Point{0x80000000u, 1u}, Point{0xFFFFFFFFu, 0x7FFFFFFFu}}) {
    check_identical(base, measure(s, translated(r, shift), sim));
    sim.user_power = UserPowerMode::center_of_gravity;
    check_identical(measure(s, r, sim), measure(s, translated(r, shift), sim));
    sim.user_power = UserPowerMode::exact;
  }
}

TEST_CASE("single BS serving a single user") {
  ScenarioConfig c;
  c.population.iot_fraction = 0.0;
  const auto s = validate(c);
  const double side = 5000.0, d = 137.0;
  Realization r;
  r.side = side;
  r.bs = {at_metres(side, 2500.0, 2500.0)};
  r.band = {0};
  r.users = {User{at_metres(side, 2500.0 + d, 2500.0), false, true, -1}};
  associate(r);
  CHECK(r.users[0].cell == 0);
  CHECK(distance(r, r.users[0].at, r.bs[0]) == doctest::Approx(d).epsilon(1e-9));

  const auto m = measure(s, r, SimConfig{});
  const double dist = distance(r, r.users[0].at, r.bs[0]);
  CHECK(m.tau_d == doctest::Approx(1.0 / perf::capacity(dist, c.radio.tx_power, c.radio.gain, 0.0, c.radio)));
  CHECK(m.tau_u == doctest::Approx(1.0 / perf::capacity(dist, c.scheduling.p_iot, 1.0, 0.0, c.radio)));
  CHECK(m.active_iot == 0);
  CHECK(std::isnan(m.cdf[0]));
}

TEST_CASE("uplink power from a single transmitting user") {
  ScenarioConfig c;
  c.population.iot_fraction = 0.0;
  const auto s = validate(c);
  const double side = 5000.0;
  Realization r;
  r.side = side;
  r.bs = {at_metres(side, 1000.0, 1000.0)};
  r.band = {0};
  r.users = {User{at_metres(side, 1040.0, 1030.0), false, true, -1}};
  associate(r);
  const Point probe = at_metres(side, 1040.0 + 60.0, 1030.0 + 80.0);  // 100 m away
  const double expected = 0.7 * c.scheduling.p_bb * std::pow(100.0, -c.radio.alpha);
  CHECK(exact_user_power(s, r, probe, 0.7, UserPowerMode::exact) == doctest::Approx(expected).epsilon(1e-6));
  CHECK(exact_user_power(s, r, probe, 0.7, UserPowerMode::center_of_gravity) ==
        doctest::Approx(expected).epsilon(1e-6));
  // The receiver's own transmissions do not count.
  CHECK(exact_user_power(s, r, r.users[0].at, 0.7, UserPowerMode::exact, 0) == 0.0);
}

TEST_CASE("centre of gravity equals the exact sum with one user per cell") {
  const auto s = validate(small());
  const double side = 4000.0;
  Realization r;
  r.side = side;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, side);
  for (int j = 0; j < 30; ++j) {
    const double x = u(rng), y = u(rng);
    r.bs.push_back(at_metres(side, x, y));
    r.band.push_back(0);
    r.users.push_back(User{at_metres(side, x + 3.0, y - 2.0), j % 2 == 0, true, -1});
  }
  associate(r);
  for (int i = 0; i < 20; ++i) {
    const Point p = at_metres(side, u(rng), u(rng));
    CHECK(exact_user_power(s, r, p, 1.0, UserPowerMode::center_of_gravity) ==
          doctest::Approx(exact_user_power(s, r, p, 1.0, UserPowerMode::exact)).epsilon(1e-9));
  }
}

TEST_CASE("exact user power matches the analytic plane average") {
  ScenarioConfig c;
  c.population.lambda_u = 1e-2;
  c.population.lambda_b = 2e-3;
  const auto s = validate(c);
  std::mt19937_64 rng(1);
  double total = 0.0;
  int n = 0;
  for (int rep = 0; rep < 5; ++rep) {
    const auto r = draw_realization(s, std::sqrt(100.0 / c.population.lambda_b), rng);
    for (int i = 0; i < 4000; ++i, ++n)
      total += exact_user_power(s, r, Point{static_cast<std::uint32_t>(rng() >> 32),
                                            static_cast<std::uint32_t>(rng() >> 32)},
                                1.0);
  }
  CHECK(std::abs(total / n / perf::mean_user_power(s, 1.0) - 1.0) < 0.05);
}

TEST_CASE("same seed gives the same report; worker count does not matter") {
  const auto s = validate(small());
  SimConfig sim;
  sim.replications = 6;
  sim.seed = 17;
  const auto a = run_sim(s, sim);
  sim.jobs = 3;
  const auto b = run_sim(s, sim);
  REQUIRE(a.replications.size() == b.replications.size());
  for (std::size_t k = 0; k < a.replications.size(); ++k) check_identical(a.replications[k], b.replications[k]);
  CHECK(same_bits(a.tau_d.mean, b.tau_d.mean));
  CHECK(same_bits(a.cdf[0].half_width, b.cdf[0].half_width));
  sim.seed = 18;
  CHECK_FALSE(same_bits(run_sim(s, sim).tau_d.mean, a.tau_d.mean));
}

TEST_CASE("empirical harvest CDF is a CDF") {
  ScenarioConfig c = small();
  c.mode = {EhModeKind::dps, 0.8};
  SimConfig sim;
  sim.replications = 4;
  for (double h = 1e-9; h < 10.0; h *= 3) sim.harvest_grid.push_back(h);
  const auto rep = run_sim(validate(c), sim);
  double prev = 0.0;
  for (const auto& ci : rep.cdf) {
    CHECK(ci.mean >= prev);
    CHECK(ci.mean <= 1.0);
    prev = ci.mean;
  }
  CHECK(rep.cdf.back().mean == 1.0);
}

TEST_CASE("realized users per BS match the density ratio") {
  const auto s = validate(small());
  const auto rep = run_sim(s, SimConfig{});
  const double ratio = s.population().lambda_u / s.population().lambda_b;
  CHECK(std::abs(rep.users_per_bs.mean - ratio) <= rep.users_per_bs.half_width);
  CHECK(rep.mean_bs == doctest::Approx(100.0).epsilon(0.05));
}

TEST_CASE("sampled and mean reuse agree on average") {
  const auto s = validate(small());
  SimConfig sim;
  sim.harvest = false;
  const auto mean = run_sim(s, sim);
  sim.reuse = ReuseMode::sampled;
  const auto sampled = run_sim(s, sim);
  CHECK(std::abs(mean.tau_d.mean - sampled.tau_d.mean) <= mean.tau_d.half_width + sampled.tau_d.half_width);
}

TEST_CASE("vanishing interference approaches the analytic delay") {
  ScenarioConfig c = small();
  c.radio.reuse = 1000;
  const auto s = validate(c);
  SimConfig sim;
  sim.harvest = false;
  const auto rep = run_sim(s, sim);
  const auto model = perf::evaluate(s);
  CHECK(std::abs(model.tau_d - rep.tau_d.mean) <= rep.tau_d.half_width + 0.08 * rep.tau_d.mean);
  CHECK(std::abs(model.tau_u - rep.tau_u.mean) <= rep.tau_u.half_width + 0.08 * rep.tau_u.mean);
}

TEST_CASE("downlink delay at the reference validation point agrees with the model") {
  ScenarioConfig c;
  c.population.lambda_u = 1e-3;
  c.population.lambda_b = 1e-4;
  const auto s = validate(c);
  const auto model = perf::evaluate(s);
  REQUIRE(model.util_d < 1.0);
  SimConfig sim;
  sim.harvest = false;
  const auto rep = run_sim(s, sim);
  CHECK(std::abs(model.tau_d - rep.tau_d.mean) <= rep.tau_d.half_width + 0.08 * rep.tau_d.mean);
  CHECK(std::abs(model.tau_u - rep.tau_u.mean) <= rep.tau_u.half_width + 0.08 * rep.tau_u.mean);
}

TEST_CASE("confidence interval") {
  const auto ci = confidence_interval({1.0, 2.0, 3.0, 4.0, NAN});
  CHECK(ci.samples == 4);
  CHECK(ci.mean == 2.5);
  // t_{0.975, 3} = 3.182446; sd = 1.290994.
  CHECK(ci.half_width == doctest::Approx(3.182446 * 1.290994 / 2.0).epsilon(1e-6));
  CHECK(std::isnan(confidence_interval({}).mean));
}

TEST_CASE("simulation configuration checks") {
  const auto s = validate(small());
  SimConfig sim;
  sim.side = 100.0;
  CHECK_THROWS_AS(run_sim(s, sim), SimConfigError);
  sim = {};
  sim.replications = 1;
  CHECK_THROWS_AS(run_sim(s, sim), SimConfigError);
  CHECK(region_side(s, SimConfig{}) == doctest::Approx(1000.0));
}
