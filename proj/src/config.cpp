#include "swipt/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace swipt::config {

namespace {

enum class Dim { none, count, power, psd, frequency, density, delay, angle, length, inv_power };

struct Unit {
  const char* name;
  double factor;
  bool decibel = false;  // value is 10 log10(x / factor)
};

const std::map<Dim, std::vector<Unit>>& unit_table() {
  static const std::map<Dim, std::vector<Unit>> table = {
      {Dim::power, {{"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}, {"kW", 1e3}, {"dBm", 1e-3, true}, {"dBW", 1.0, true}}},
      {Dim::psd, {{"W/Hz", 1.0}, {"mW/Hz", 1e-3}, {"dBm/Hz", 1e-3, true}, {"dBW/Hz", 1.0, true}}},
      {Dim::frequency, {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}},
      {Dim::density, {{"m^-2", 1.0}, {"/m2", 1.0}, {"/m^2", 1.0}, {"km^-2", 1e-6}, {"/km2", 1e-6}, {"/km^2", 1e-6}}},
      {Dim::delay, {{"s/bit", 1.0}, {"ms/bit", 1e-3}, {"us/bit", 1e-6}, {"ns/bit", 1e-9}}},
      {Dim::angle, {{"deg", 1.0}}},
      {Dim::length, {{"m", 1.0}, {"km", 1e3}}},
      {Dim::inv_power, {{"W^-1", 1.0}, {"/W", 1.0}, {"mW^-1", 1e3}, {"/mW", 1e3}}},
  };
  return table;
}

const char* si_unit(Dim d) {
  switch (d) {
    case Dim::power: return "W";
    case Dim::psd: return "W/Hz";
    case Dim::frequency: return "Hz";
    case Dim::density: return "m^-2";
    case Dim::delay: return "s/bit";
    case Dim::angle: return "deg";
    case Dim::length: return "m";
    case Dim::inv_power: return "W^-1";
    default: return "";
  }
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": '" + text + "' is not a number");
  return v;
}

double quantity(const std::string& key, Dim dim, const std::string& raw) {
  const std::string text = trim(raw);
  // Split the leading number from an optional unit suffix.
  std::size_t cut = text.find_first_of(" \t");
  std::string num = text.substr(0, cut);
  std::string unit = cut == std::string::npos ? "" : trim(text.substr(cut));
  if (unit.empty()) {
    // Also accept the unit glued to the number ("5mW").
    std::size_t i = 0;
    while (i < num.size() && (std::isdigit(static_cast<unsigned char>(num[i])) || std::strchr("+-.eE", num[i]))) {
      // 'e' followed by a letter starts a unit, not an exponent.
      if ((num[i] == 'e' || num[i] == 'E') && (i + 1 >= num.size() || !std::strchr("+-0123456789", num[i + 1])))
        break;
      ++i;
    }
    unit = num.substr(i);
    num = num.substr(0, i);
  }
  const double v = number(key, num);
  if (unit.empty()) return v;
  const auto it = unit_table().find(dim);
  if (it != unit_table().end()) {
    for (const auto& u : it->second)
      if (unit == u.name) return u.decibel ? u.factor * std::pow(10.0, v / 10.0) : v * u.factor;
  }
  std::string accepted;
  if (it != unit_table().end())
    for (const auto& u : it->second) accepted += std::string(accepted.empty() ? "" : ", ") + u.name;
  throw ConfigError(key + ": unit '" + unit + "' not accepted" +
                    (accepted.empty() ? " (dimensionless)" : " (use one of: " + accepted + ")"));
}

bool boolean(const std::string& key, const std::string& text) {
  const auto t = lower(trim(text));
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ConfigError(key + ": '" + text + "' is not a boolean");
}

int integer(const std::string& key, const std::string& text) {
  const double v = number(key, trim(text));
  if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError(key + ": '" + text + "' is not an integer");
  return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "lo:hi:n" -> n log-spaced values.
std::vector<double> log_range(const std::string& key, Dim dim, const std::string& text) {
  const auto a = text.find(':');
  const auto b = text.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) throw ConfigError(key + ": expected lo:hi:count");
  const double lo = quantity(key, dim, text.substr(0, a));
  const double hi = quantity(key, dim, text.substr(a + 1, b - a - 1));
  const int n = integer(key, text.substr(b + 1));
  if (!(lo > 0 && hi > lo) || n < 2) throw ConfigError(key + ": need 0 < lo < hi and count >= 2");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  v.back() = hi;
  return v;
}

struct Entry {
  std::string key;
  Dim dim;
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

Entry real(std::string key, Dim dim, std::string help, std::function<double&(RunConfig&)> ref) {
  auto cref = ref;
  return {key, dim, std::move(help),
          [key, dim, ref](RunConfig& c, const std::string& v) { ref(c) = quantity(key, dim, v); },
          [cref](const RunConfig& c) { return format(cref(const_cast<RunConfig&>(c))); }};
}

Entry whole(std::string key, std::string help, std::function<int&(RunConfig&)> ref) {
  return {key, Dim::count, std::move(help), [key, ref](RunConfig& c, const std::string& v) { ref(c) = integer(key, v); },
          [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); }};
}

Entry flag(std::string key, std::string help, std::function<bool&(RunConfig&)> ref) {
  return {key, Dim::none, std::move(help), [key, ref](RunConfig& c, const std::string& v) { ref(c) = boolean(key, v); },
          [ref](const RunConfig& c) { return std::string(ref(const_cast<RunConfig&>(c)) ? "true" : "false"); }};
}

template <class E>
Entry pick(std::string key, std::string help, std::function<E&(RunConfig&)> ref,
           std::initializer_list<std::pair<const char*, E>> options) {
  std::vector<std::pair<const char*, E>> opts(options);
  return {key, Dim::none, std::move(help),
          [key, ref, opts](RunConfig& c, const std::string& v) {
            const auto t = lower(trim(v));
            std::string names;
            for (const auto& [name, value] : opts) {
              if (t == name) {
                ref(c) = value;
                return;
              }
              names += std::string(names.empty() ? "" : ", ") + name;
            }
            throw ConfigError(key + ": '" + v + "' is not one of " + names);
          },
          [ref, opts](const RunConfig& c) {
            for (const auto& [name, value] : opts)
              if (value == ref(const_cast<RunConfig&>(c))) return std::string(name);
            return std::string("?");
          }};
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    // radio
    t.push_back(real("radio.bandwidth", Dim::frequency, "system bandwidth B", [](RunConfig& c) -> double& { return c.scenario.radio.bandwidth; }));
    t.push_back(whole("radio.reuse", "frequency reuse factor k", [](RunConfig& c) -> int& { return c.scenario.radio.reuse; }));
    t.push_back(real("radio.noise_psd", Dim::psd, "noise power spectral density N0", [](RunConfig& c) -> double& { return c.scenario.radio.noise_psd; }));
    t.push_back(flag("radio.noise_raw", "use N0 verbatim as the noise power instead of N0 B/k", [](RunConfig& c) -> bool& { return c.scenario.radio.noise_raw; }));
    t.push_back(real("radio.alpha", Dim::none, "path-loss exponent (> 2)", [](RunConfig& c) -> double& { return c.scenario.radio.alpha; }));
    t.push_back(real("radio.P", Dim::power, "BS transmit power", [](RunConfig& c) -> double& { return c.scenario.radio.tx_power; }));
    t.push_back(real("radio.P_min", Dim::power, "lower bound of the transmit power", [](RunConfig& c) -> double& { return c.scenario.radio.p_min; }));
    t.push_back(real("radio.P_max", Dim::power, "upper bound of the transmit power", [](RunConfig& c) -> double& { return c.scenario.radio.p_max; }));
    t.push_back(real("radio.G", Dim::none, "beamforming gain (linear)", [](RunConfig& c) -> double& { return c.scenario.radio.gain; }));
    t.push_back(real("radio.aperture", Dim::angle, "main-lobe aperture", [](RunConfig& c) -> double& { return c.scenario.radio.aperture; }));
    t.push_back({"radio.L", Dim::none, "side-lobe loss (linear), or 'derived' for 1 - (G-1) a / (360 - a)",
                 [](RunConfig& c, const std::string& v) {
                   if (lower(trim(v)) == "derived") c.scenario.radio.side_loss_override.reset();
                   else c.scenario.radio.side_loss_override = quantity("radio.L", Dim::none, v);
                 },
                 [](const RunConfig& c) {
                   const auto& o = c.scenario.radio.side_loss_override;
                   return o ? format(*o) : std::string("derived");
                 }});
    // population
    t.push_back(real("population.lambda_u", Dim::density, "user density", [](RunConfig& c) -> double& { return c.scenario.population.lambda_u; }));
    t.push_back(real("population.lambda_b", Dim::density, "BS density", [](RunConfig& c) -> double& { return c.scenario.population.lambda_b; }));
    t.push_back(real("population.iot_fraction", Dim::none, "share of users that are IoT devices", [](RunConfig& c) -> double& { return c.scenario.population.iot_fraction; }));
    t.push_back(real("population.duty_cycle", Dim::none, "IoT activity probability", [](RunConfig& c) -> double& { return c.scenario.population.duty_cycle; }));
    t.push_back(real("population.min_users_per_bs", Dim::none, "floor on lambda_u / lambda_b", [](RunConfig& c) -> double& { return c.scenario.population.min_users_per_bs; }));
    t.push_back(real("population.lambda_b_max", Dim::density, "upper bound on the BS density", [](RunConfig& c) -> double& { return c.scenario.population.lambda_b_max; }));
    // scheduling
    t.push_back(real("scheduling.delta_d", Dim::none, "BB:IoT downlink throughput ratio", [](RunConfig& c) -> double& { return c.scenario.scheduling.delta_d; }));
    t.push_back(real("scheduling.delta_u", Dim::none, "BB:IoT uplink GPS weight", [](RunConfig& c) -> double& { return c.scenario.scheduling.delta_u; }));
    t.push_back({"scheduling.w_d", Dim::none, "downlink BB GPS weight, or 'fair' for the maximally fair value",
                 [](RunConfig& c, const std::string& v) {
                   if (lower(trim(v)) == "fair") c.scenario.scheduling.w_d.reset();
                   else c.scenario.scheduling.w_d = quantity("scheduling.w_d", Dim::none, v);
                 },
                 [](const RunConfig& c) {
                   const auto& w = c.scenario.scheduling.w_d;
                   return w ? format(*w) : std::string("fair");
                 }});
    t.push_back(real("scheduling.P_bb", Dim::power, "BB UE transmit power", [](RunConfig& c) -> double& { return c.scenario.scheduling.p_bb; }));
    t.push_back(real("scheduling.P_iot", Dim::power, "IoT UE transmit power", [](RunConfig& c) -> double& { return c.scenario.scheduling.p_iot; }));
    // qos
    t.push_back(real("qos.tau_d0", Dim::delay, "downlink per-bit delay target", [](RunConfig& c) -> double& { return c.scenario.qos.tau_d0; }));
    t.push_back(real("qos.tau_u0", Dim::delay, "uplink per-bit delay target", [](RunConfig& c) -> double& { return c.scenario.qos.tau_u0; }));
    t.push_back(real("qos.h0", Dim::power, "minimum harvested power", [](RunConfig& c) -> double& { return c.scenario.qos.h0; }));
    t.push_back(real("qos.mu", Dim::none, "harvest outage cap", [](RunConfig& c) -> double& { return c.scenario.qos.mu; }));
    // energy
    t.push_back(real("energy.q1", Dim::power, "BS idle power", [](RunConfig& c) -> double& { return c.scenario.energy.q1; }));
    t.push_back(real("energy.q2", Dim::power, "BS load-dependent power", [](RunConfig& c) -> double& { return c.scenario.energy.q2; }));
    t.push_back(real("energy.q3", Dim::none, "BS power per W of transmit power above P_min", [](RunConfig& c) -> double& { return c.scenario.energy.q3; }));
    // harvest
    t.push_back(pick<HarvestCurveKind>("harvest.curve", "harvester transfer curve",
                                       [](RunConfig& c) -> HarvestCurveKind& { return c.scenario.harvest.kind; },
                                       {{"linear", HarvestCurveKind::linear}, {"sigmoid", HarvestCurveKind::sigmoid}}));
    t.push_back(real("harvest.xi", Dim::none, "linear conversion efficiency", [](RunConfig& c) -> double& { return c.scenario.harvest.xi; }));
    t.push_back(real("harvest.h_max", Dim::power, "sigmoid saturation output", [](RunConfig& c) -> double& { return c.scenario.harvest.h_max; }));
    t.push_back(real("harvest.h_s", Dim::power, "sigmoid sensitivity threshold", [](RunConfig& c) -> double& { return c.scenario.harvest.h_s; }));
    t.push_back(real("harvest.chi", Dim::inv_power, "sigmoid steepness", [](RunConfig& c) -> double& { return c.scenario.harvest.chi; }));
    t.push_back(real("harvest.iota", Dim::none, "sigmoid offset", [](RunConfig& c) -> double& { return c.scenario.harvest.iota; }));
    t.push_back(pick<HarvestSources>("harvest.sources", "what feeds the harvester besides active charging",
                                     [](RunConfig& c) -> HarvestSources& { return c.scenario.sources; },
                                     {{"all", HarvestSources::all}, {"no_upc", HarvestSources::no_upc},
                                      {"active_only", HarvestSources::active_only}}));
    // mode
    t.push_back(pick<EhModeKind>("mode.kind", "energy-harvesting receiver",
                                 [](RunConfig& c) -> EhModeKind& { return c.scenario.mode.kind; },
                                 {{"ts", EhModeKind::ts}, {"sps", EhModeKind::sps}, {"dps", EhModeKind::dps}}));
    t.push_back(real("mode.split", Dim::none, "eta (TS) or nu (SPS/DPS)", [](RunConfig& c) -> double& { return c.scenario.mode.split; }));
    // numerics
    t.push_back(real("numerics.quad_rel_tol", Dim::none, "adaptive quadrature relative tolerance", [](RunConfig& c) -> double& { return c.scenario.numerics.quad_rel_tol; }));
    t.push_back(real("numerics.truncation_mass", Dim::none, "radial truncation, lambda_b pi r_max^2", [](RunConfig& c) -> double& { return c.scenario.numerics.truncation_mass; }));
    t.push_back(real("numerics.fp_tol_factor", Dim::none, "fixed-point tolerance as a multiple of tau_d0", [](RunConfig& c) -> double& { return c.scenario.numerics.fp_tol_factor; }));
    t.push_back(real("numerics.fp_damping", Dim::none, "fixed-point damping", [](RunConfig& c) -> double& { return c.scenario.numerics.fp_damping; }));
    t.push_back(whole("numerics.fp_max_iter", "fixed-point iteration cap", [](RunConfig& c) -> int& { return c.scenario.numerics.fp_max_iter; }));
    t.push_back(whole("numerics.profile_grid", "grid points scanning the harvest profile", [](RunConfig& c) -> int& { return c.scenario.numerics.profile_grid; }));
    t.push_back(pick<CdfForm>("numerics.cdf_form", "harvest CDF evaluation",
                              [](RunConfig& c) -> CdfForm& { return c.scenario.numerics.cdf_form; },
                              {{"robust", CdfForm::robust}, {"verbatim", CdfForm::verbatim}}));
    // fitness
    t.push_back(real("fitness.k1", Dim::none, "uplink overload penalty weight", [](RunConfig& c) -> double& { return c.fitness.k1; }));
    t.push_back(real("fitness.k2", Dim::none, "harvest outage penalty weight", [](RunConfig& c) -> double& { return c.fitness.k2; }));
    t.push_back(real("fitness.k3", Dim::none, "downlink overload penalty weight", [](RunConfig& c) -> double& { return c.fitness.k3; }));
    t.push_back(pick<objective::PenaltySign>("fitness.sign", "harvest penalty form",
                                             [](RunConfig& c) -> objective::PenaltySign& { return c.fitness.sign; },
                                             {{"corrected", objective::PenaltySign::corrected},
                                              {"verbatim", objective::PenaltySign::verbatim}}));
    // ga
    t.push_back(whole("ga.population", "population size n", [](RunConfig& c) -> int& { return c.ga.population; }));
    t.push_back(whole("ga.max_generations", "generation limit m", [](RunConfig& c) -> int& { return c.ga.max_generations; }));
    t.push_back(whole("ga.stall_window", "stall window i (generations)", [](RunConfig& c) -> int& { return c.ga.stall_window; }));
    t.push_back(real("ga.stall_threshold", Dim::none, "stall threshold", [](RunConfig& c) -> double& { return c.ga.stall_threshold; }));
    t.push_back(pick<solver::StallRule>("ga.stall_rule", "stall statistic",
                                        [](RunConfig& c) -> solver::StallRule& { return c.ga.stall_rule; },
                                        {{"best", solver::StallRule::best}, {"spread", solver::StallRule::spread}}));
    t.push_back(pick<solver::Replacement>("ga.replacement", "survivor selection",
                                          [](RunConfig& c) -> solver::Replacement& { return c.ga.replacement; },
                                          {{"merge", solver::Replacement::merge},
                                           {"generational", solver::Replacement::generational}}));
    t.push_back(real("ga.ratio", Dim::none, "heuristic crossover ratio", [](RunConfig& c) -> double& { return c.ga.ratio; }));
    t.push_back(real("ga.crossover_fraction", Dim::none, "share of non-elite children bred by crossover", [](RunConfig& c) -> double& { return c.ga.crossover_fraction; }));
    t.push_back(real("ga.mutation_start", Dim::none, "initial mutation sigma (box fraction)", [](RunConfig& c) -> double& { return c.ga.mutation_start; }));
    t.push_back(real("ga.mutation_end", Dim::none, "final mutation sigma (box fraction)", [](RunConfig& c) -> double& { return c.ga.mutation_end; }));
    t.push_back(whole("ga.elite", "individuals copied unchanged", [](RunConfig& c) -> int& { return c.ga.elite; }));
    t.push_back(real("ga.selection_pressure", Dim::none, "expected offspring of the best rank, in [1, 2]", [](RunConfig& c) -> double& { return c.ga.selection_pressure; }));
    // grid
    t.push_back(whole("grid.power", "grid points along P", [](RunConfig& c) -> int& { return c.grid.power; }));
    t.push_back(whole("grid.lambda_b", "grid points along lambda_b", [](RunConfig& c) -> int& { return c.grid.lambda_b; }));
    t.push_back(whole("grid.split", "grid points along the split", [](RunConfig& c) -> int& { return c.grid.split; }));
    t.push_back(whole("grid.refine_points", "points per axis of the local refinement (0 disables)", [](RunConfig& c) -> int& { return c.refine_points; }));
    // sim
    t.push_back(real("sim.side", Dim::length, "torus side; 0 sizes it from sim.target_bs", [](RunConfig& c) -> double& { return c.sim.side; }));
    t.push_back(real("sim.target_bs", Dim::none, "expected BS count when sim.side = 0", [](RunConfig& c) -> double& { return c.sim.target_bs; }));
    t.push_back(whole("sim.replications", "independent replications", [](RunConfig& c) -> int& { return c.sim.replications; }));
    t.push_back(flag("sim.delays", "report delays", [](RunConfig& c) -> bool& { return c.sim.delays; }));
    t.push_back(flag("sim.harvest", "measure the harvest CDF", [](RunConfig& c) -> bool& { return c.sim.harvest; }));
    t.push_back({"sim.harvest_grid", Dim::power, "comma-separated harvested-power levels; empty means qos.h0",
                 [](RunConfig& c, const std::string& v) {
                   c.sim.harvest_grid.clear();
                   for (const auto& item : split_list(v)) c.sim.harvest_grid.push_back(quantity("sim.harvest_grid", Dim::power, item));
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (double h : c.sim.harvest_grid) out += (out.empty() ? "" : ",") + format(h);
                   return out;
                 }});
    t.push_back(pick<sim::UserPowerMode>("sim.user_power", "uplink power source model",
                                         [](RunConfig& c) -> sim::UserPowerMode& { return c.sim.user_power; },
                                         {{"cog", sim::UserPowerMode::center_of_gravity},
                                          {"exact", sim::UserPowerMode::exact}}));
    t.push_back(pick<sim::ReuseMode>("sim.reuse", "frequency reuse model",
                                     [](RunConfig& c) -> sim::ReuseMode& { return c.sim.reuse; },
                                     {{"mean", sim::ReuseMode::mean}, {"sampled", sim::ReuseMode::sampled}}));
    t.push_back(whole("sim.probes_per_bs", "area-estimation probes per expected BS", [](RunConfig& c) -> int& { return c.sim.probes_per_bs; }));
    // sweep
    t.push_back({"sweep.key", Dim::none, "swept key (any numeric key)",
                 [](RunConfig& c, const std::string& v) { c.sweep.key = trim(v); },
                 [](const RunConfig& c) { return c.sweep.key; }});
    t.push_back({"sweep.values", Dim::none, "comma-separated values, units as for the swept key",
                 [](RunConfig& c, const std::string& v) {
                   c.sweep.values.clear();
                   for (const auto& item : split_list(v)) c.sweep.values.push_back(parse_quantity(c.sweep.key, item));
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (double x : c.sweep.values) out += (out.empty() ? "" : ",") + format(x);
                   return out;
                 }});
    t.push_back({"sweep.range", Dim::none, "lo:hi:count, log-spaced; replaces sweep.values",
                 [](RunConfig& c, const std::string& v) {
                   const auto& all = entries();
                   const auto it = std::find_if(all.begin(), all.end(), [&](const Entry& e) { return e.key == c.sweep.key; });
                   if (it == all.end()) throw ConfigError("sweep.range: unknown sweep.key '" + c.sweep.key + "'");
                   c.sweep.values = log_range("sweep.range", it->dim, v);
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (double x : c.sweep.values) out += (out.empty() ? "" : ",") + format(x);
                   return out;
                 }});
    t.push_back(pick<SweepTask>("sweep.task", "work done at each sweep point",
                                [](RunConfig& c) -> SweepTask& { return c.sweep.task; },
                                {{"evaluate", SweepTask::evaluate}, {"optimize", SweepTask::optimize},
                                 {"simulate", SweepTask::simulate}}));
    t.push_back(flag("sweep.simulate_optimum", "with sweep.task = optimize, also simulate each optimum",
                     [](RunConfig& c) -> bool& { return c.sweep.simulate_optimum; }));
    // run
    t.push_back({"seed", Dim::none, "master seed for every random stream",
                 [](RunConfig& c, const std::string& v) {
                   const auto t = trim(v);
                   std::uint64_t s = 0;
                   const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), s);
                   if (ec != std::errc() || ptr != t.data() + t.size()) throw ConfigError("seed: '" + v + "' is not an unsigned integer");
                   c.seed = s;
                 },
                 [](const RunConfig& c) { return c.seed ? std::to_string(*c.seed) : std::string(""); }});
    return t;
  }();
  return table;
}

const Entry& find(const std::string& key) {
  const auto& all = entries();
  const auto it = std::find_if(all.begin(), all.end(), [&](const Entry& e) { return e.key == key; });
  if (it == all.end()) throw ConfigError("unknown key '" + key + "'");
  return *it;
}

}  // namespace

const char* to_string(SweepTask t) {
  switch (t) {
    case SweepTask::evaluate: return "evaluate";
    case SweepTask::optimize: return "optimize";
    case SweepTask::simulate: return "simulate";
  }
  return "?";
}

const std::vector<KeyInfo>& keys() {
  static const std::vector<KeyInfo> out = [] {
    std::vector<KeyInfo> v;
    for (const auto& e : entries()) v.push_back({e.key, si_unit(e.dim), e.help});
    return v;
  }();
  return out;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"paper-default", "llp",    "hlp",    "ts",     "sps",
                                                 "dps",           "linear", "sigmoid", "no-upc", "active-only",
                                                 "strict-loss"};
  return names;
}

double parse_quantity(const std::string& key, const std::string& text) {
  const auto& e = find(key);
  if (e.dim == Dim::count) return integer(key, text);
  return quantity(key, e.dim, text);
}

void apply_preset(RunConfig& cfg, const std::string& raw) {
  const auto name = lower(trim(raw));
  auto& s = cfg.scenario;
  if (name == "paper-default") s = ScenarioConfig{};
  else if (name == "llp") s.energy = BsEnergyModel::llp();
  else if (name == "hlp") s.energy = BsEnergyModel::hlp();
  else if (name == "ts") s.mode.kind = EhModeKind::ts;
  else if (name == "sps") s.mode.kind = EhModeKind::sps;
  else if (name == "dps") s.mode.kind = EhModeKind::dps;
  else if (name == "linear") s.harvest.kind = HarvestCurveKind::linear;
  else if (name == "sigmoid") s.harvest = HarvestCurve::sigmoid(10e-3, 0.064e-3, 274.0, 0.9);
  else if (name == "no-upc") s.sources = HarvestSources::no_upc;
  else if (name == "active-only") s.sources = HarvestSources::active_only;
  else if (name == "strict-loss") s.radio.side_loss_override.reset();
  else {
    std::string names;
    for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + raw + "' (known: " + names + ")");
  }
}

void set(RunConfig& cfg, const std::string& key, const std::string& value) {
  find(trim(key)).set(cfg, value);
}

std::string get(const RunConfig& cfg, const std::string& key) { return find(key).get(cfg); }

void load(RunConfig& cfg, const std::string& text, const std::string& origin) {
  struct Line {
    int number;
    std::string key, value;
  };
  std::vector<Line> lines;
  std::vector<Line> presets;
  std::istringstream in(text);
  std::string raw, section;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto where = origin + ":" + std::to_string(number) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "empty key");
    if (section.empty() && key == "preset") {
      presets.push_back({number, key, value});
      continue;
    }
    if (!section.empty()) key = section + "." + key;
    lines.push_back({number, key, value});
  }
  for (const auto& p : presets)
    for (const auto& name : split_list(p.value)) {
      try {
        apply_preset(cfg, name);
      } catch (const ConfigError& e) {
        throw ConfigError(origin + ":" + std::to_string(p.number) + ": " + e.what());
      }
    }
  for (const auto& l : lines) {
    try {
      set(cfg, l.key, l.value);
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(l.number) + ": " + e.what());
    }
  }
}

void load_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  load(cfg, buf.str(), path);
}

}  // namespace swipt::config
