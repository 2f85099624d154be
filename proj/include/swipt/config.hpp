#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swipt/core.hpp"
#include "swipt/objective.hpp"
#include "swipt/simulator.hpp"
#include "swipt/solver.hpp"

// Scenario files: flat `key = value` lines, optional [section] headers that
// prefix the following keys, '#' comments. Values may carry a unit suffix
// ("30 dBm", "5 mW", "50 MHz", "100 /km2"); bare numbers are SI.

namespace swipt::config {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepTask { evaluate, optimize, simulate };
const char* to_string(SweepTask t);

struct SweepSpec {
  std::string key = "population.lambda_u";
  std::vector<double> values;  // one sweep point per value, in the order given
  SweepTask task = SweepTask::optimize;
  bool simulate_optimum = false;  // with task = optimize, also simulate each optimum
};

struct RunConfig {
  ScenarioConfig scenario;
  solver::GaConfig ga;
  solver::GridSteps grid;
  int refine_points = 5;
  sim::SimConfig sim;
  objective::FitnessWeights fitness;
  SweepSpec sweep;
  std::optional<std::uint64_t> seed;  // nullopt: the CLI picks and prints one
};

struct KeyInfo {
  std::string key;
  std::string unit;  // SI unit of the stored value; empty when dimensionless
  std::string help;
};

// Every accepted key, in documentation order.
const std::vector<KeyInfo>& keys();
const std::vector<std::string>& preset_names();

// Parses "<number> [unit]" for a key; the unit must fit the key's dimension.
double parse_quantity(const std::string& key, const std::string& text);

void apply_preset(RunConfig& cfg, const std::string& name);
// Sets one key (dotted path) from its textual value.
void set(RunConfig& cfg, const std::string& key, const std::string& value);

// Applies `text` on top of `cfg`: preset lines first, then the remaining keys
// in file order. `origin` names the source in diagnostics.
void load(RunConfig& cfg, const std::string& text, const std::string& origin = "<config>");
void load_file(RunConfig& cfg, const std::string& path);

// Reads back a key as text in SI units (used to label sweep rows).
std::string get(const RunConfig& cfg, const std::string& key);

}  // namespace swipt::config
