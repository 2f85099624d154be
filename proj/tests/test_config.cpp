#include <cmath>
#include <set>

#include "doctest.h"
#include "swipt/config.hpp"

using namespace swipt;
using namespace swipt::config;

TEST_CASE("quantities with units") {
  CHECK(parse_quantity("radio.P", "30 dBm") == doctest::Approx(1.0));
  CHECK(parse_quantity("radio.P", "5 mW") == doctest::Approx(5e-3));
  CHECK(parse_quantity("radio.P", "5mW") == doctest::Approx(5e-3));
  CHECK(parse_quantity("radio.P", "10 dBW") == doctest::Approx(10.0));
  CHECK(parse_quantity("radio.P", "2.5") == 2.5);
  CHECK(parse_quantity("radio.bandwidth", "50 MHz") == doctest::Approx(50e6));
  CHECK(parse_quantity("radio.noise_psd", "-174 dBm/Hz") == doctest::Approx(3.981e-21).epsilon(1e-3));
  CHECK(parse_quantity("population.lambda_u", "100 /km2") == doctest::Approx(1e-4));
  CHECK(parse_quantity("population.lambda_u", "1000 km^-2") == doctest::Approx(1e-3));
  CHECK(parse_quantity("qos.tau_d0", "10 us/bit") == doctest::Approx(1e-5));
  CHECK(parse_quantity("qos.h0", "1 mW") == doctest::Approx(1e-3));
  CHECK(parse_quantity("harvest.chi", "0.274 /mW") == doctest::Approx(274.0));

  CHECK_THROWS_AS(parse_quantity("radio.P", "5 MHz"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("radio.P", "five"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("population.lambda_u", "3 dBm"), ConfigError);
}

TEST_CASE("unknown keys and values are rejected") {
  RunConfig cfg;
  CHECK_THROWS_AS(set(cfg, "radio.nonsense", "1"), ConfigError);
  CHECK_THROWS_AS(set(cfg, "mode.kind", "xyz"), ConfigError);
  CHECK_THROWS_AS(set(cfg, "radio.reuse", "2.5"), ConfigError);
  CHECK_THROWS_AS(apply_preset(cfg, "nope"), ConfigError);
  try {
    load(cfg, "[radio]\nalpha = 3\nbogus = 2\n", "f.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("f.cfg:3") != std::string::npos);
  }
}

TEST_CASE("presets") {
  RunConfig cfg;
  apply_preset(cfg, "hlp");
  CHECK(cfg.scenario.energy == BsEnergyModel::hlp());
  apply_preset(cfg, "llp");
  CHECK(cfg.scenario.energy == BsEnergyModel::llp());
  apply_preset(cfg, "dps");
  CHECK(cfg.scenario.mode.kind == EhModeKind::dps);
  apply_preset(cfg, "sigmoid");
  CHECK(cfg.scenario.harvest.kind == HarvestCurveKind::sigmoid);
  CHECK(cfg.scenario.harvest.chi == 274.0);
  apply_preset(cfg, "no-upc");
  CHECK(cfg.scenario.sources == HarvestSources::no_upc);
  apply_preset(cfg, "paper-default");
  CHECK(cfg.scenario == ScenarioConfig{});
  for (const auto& name : preset_names()) CHECK_NOTHROW(apply_preset(cfg, name));
}

TEST_CASE("files apply presets first, then keys in order") {
  RunConfig cfg;
  load(cfg,
       "# comment\n"
       "seed = 5\n"
       "mode.split = 0.25\n"
       "preset = hlp, sps\n"
       "[population]\n"
       "lambda_u = 1000 /km2   # trailing comment\n"
       "lambda_b = 1e-4\n"
       "[scheduling]\n"
       "w_d = 3\n"
       "[ga]\n"
       "population = 40\n");
  CHECK(cfg.scenario.energy == BsEnergyModel::hlp());
  CHECK(cfg.scenario.mode.kind == EhModeKind::sps);
  CHECK(cfg.scenario.mode.split == 0.25);
  CHECK(cfg.scenario.population.lambda_u == doctest::Approx(1e-3));
  CHECK(cfg.scenario.scheduling.w_d == 3.0);
  CHECK(cfg.ga.population == 40);
  CHECK(cfg.seed == 5u);

  set(cfg, "scheduling.w_d", "fair");
  CHECK_FALSE(cfg.scenario.scheduling.w_d);
  set(cfg, "radio.L", "derived");
  CHECK_FALSE(cfg.scenario.radio.side_loss_override);
}

TEST_CASE("sweep specification") {
  RunConfig cfg;
  set(cfg, "sweep.range", "1e-4:1e-1:8");
  REQUIRE(cfg.sweep.values.size() == 8);
  CHECK(cfg.sweep.values.front() == doctest::Approx(1e-4));
  CHECK(cfg.sweep.values.back() == doctest::Approx(1e-1));
  CHECK(cfg.sweep.values[1] / cfg.sweep.values[0] == doctest::Approx(std::pow(1e3, 1.0 / 7)));
  set(cfg, "sweep.values", "3e-3, 1e-3, 2e-3");
  CHECK(cfg.sweep.values == std::vector<double>{3e-3, 1e-3, 2e-3});
  CHECK_THROWS_AS(set(cfg, "sweep.range", "1:0.5:3"), ConfigError);
  set(cfg, "sweep.task", "simulate");
  CHECK(cfg.sweep.task == SweepTask::simulate);
}

TEST_CASE("every documented key can be read back") {
  RunConfig cfg;
  std::set<std::string> seen;
  for (const auto& k : keys()) {
    CHECK(seen.insert(k.key).second);
    CHECK_FALSE(k.help.empty());
    CHECK_NOTHROW(get(cfg, k.key));
  }
  CHECK(seen.count("radio.alpha"));
  CHECK(seen.count("population.lambda_u"));
  CHECK(seen.count("ga.population"));
}

TEST_CASE("values round-trip through get and set") {
  RunConfig cfg;
  set(cfg, "radio.alpha", "3.7");
  set(cfg, "population.lambda_b", "2.5e-4");
  RunConfig other;
  for (const auto& key : {"radio.alpha", "population.lambda_b", "mode.kind", "ga.population"})
    set(other, key, get(cfg, key));
  CHECK(other.scenario == cfg.scenario);
}
