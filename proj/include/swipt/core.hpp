#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Domain types shared by every module. All quantities are SI (W, m, s, Hz);
// unit conveniences are resolved by the configuration parser.

namespace swipt {

enum class EhModeKind { ts, sps, dps };

// Energy-harvesting receiver mode. `split` is the time-switch ratio eta for
// TS and the power-split ratio nu for SPS/DPS.
struct EhMode {
  EhModeKind kind = EhModeKind::ts;
  double split = 0.5;

  bool power_splitting() const { return kind != EhModeKind::ts; }
  bool operator==(const EhMode&) const = default;
};

const char* to_string(EhModeKind kind);

struct RadioParams {
  double bandwidth = 50e6;      // Hz
  int reuse = 3;                // frequency reuse factor k
  double noise_psd = 3.981e-21; // W/Hz (-174 dBm/Hz)
  bool noise_raw = false;       // use noise_psd verbatim as a power
  double alpha = 3.0;
  double tx_power = 6.0;  // W
  double p_min = 1.0;     // W
  double p_max = 11.0;    // W
  double gain = 10.0;     // beamforming gain G (linear)
  double aperture = 45.0; // main-lobe aperture, degrees
  // G=10 with a 45 degree lobe makes the strict G/L relation negative, so the
  // defaults pin L to zero side-lobe leakage. Reset to nullopt for the strict
  // relation.
  std::optional<double> side_loss_override = 0.0;

  // Side-lobe loss L. Derived from G and the aperture unless overridden.
  double side_loss() const;
  // Mean gain L_g seen by a user that is not currently being served.
  double mean_gain() const;
  // Bandwidth of one reuse band, B/k.
  double band() const { return bandwidth / reuse; }
  // Noise power in the denominator of the capacity formula.
  double noise_power() const { return noise_raw ? noise_psd : noise_psd * band(); }

  bool operator==(const RadioParams&) const = default;
};

struct PopulationParams {
  double lambda_u = 1e-3;       // m^-2
  double lambda_b = 1e-4;       // m^-2
  double iot_fraction = 0.8;    // gamma
  double duty_cycle = 1.0;      // phi
  double min_users_per_bs = 5.0;
  double lambda_b_max = 1e-2;   // m^-2

  bool operator==(const PopulationParams&) const = default;
};

struct SchedulingParams {
  double delta_d = 100.0;  // BB:IoT downlink throughput ratio
  double delta_u = 1.0;    // BB:IoT uplink GPS weight
  std::optional<double> w_d;  // nullopt selects the maximally fair weight
  double p_bb = 0.2;       // W
  double p_iot = 0.2;      // W

  bool operator==(const SchedulingParams&) const = default;
};

struct QosTargets {
  double tau_d0 = 1e-5;  // s/bit
  double tau_u0 = 1e-4;  // s/bit
  double h0 = 1e-3;      // W
  double mu = 0.05;

  bool operator==(const QosTargets&) const = default;
};

struct BsEnergyModel {
  double q1 = 1100.0;
  double q2 = 100.0;
  double q3 = 30.0;

  static BsEnergyModel llp() { return {1100.0, 100.0, 30.0}; }
  static BsEnergyModel hlp() { return {482.3, 48.23, 144.69}; }
  bool operator==(const BsEnergyModel&) const = default;
};

enum class HarvestCurveKind { linear, sigmoid };

struct HarvestCurve {
  HarvestCurveKind kind = HarvestCurveKind::linear;
  double xi = 0.9;
  double h_max = 10e-3;   // W
  double h_s = 0.064e-3;  // W
  double chi = 274.0;     // W^-1
  double iota = 0.9;

  static HarvestCurve linear(double xi) { return {HarvestCurveKind::linear, xi}; }
  static HarvestCurve sigmoid(double h_max, double h_s, double chi, double iota) {
    return {HarvestCurveKind::sigmoid, 0.9, h_max, h_s, chi, iota};
  }
  bool operator==(const HarvestCurve&) const = default;
};

// Which sources feed the harvester besides active charging from the
// serving BS: all passive sources, BS-only (no user-provided power), or none.
enum class HarvestSources { all, no_upc, active_only };

enum class CdfForm { robust, verbatim };

struct NumericsConfig {
  double quad_rel_tol = 1e-6;
  double truncation_mass = 40.0;  // lambda_b * pi * r_max^2
  double fp_tol_factor = 1e-9;    // absolute tolerance = factor * tau_d0
  double fp_damping = 0.5;
  int fp_max_iter = 200;
  int profile_grid = 512;
  CdfForm cdf_form = CdfForm::robust;

  bool operator==(const NumericsConfig&) const = default;
};

struct ScenarioConfig {
  RadioParams radio;
  PopulationParams population;
  SchedulingParams scheduling;
  QosTargets qos;
  BsEnergyModel energy;
  HarvestCurve harvest;
  HarvestSources sources = HarvestSources::all;
  EhMode mode;
  NumericsConfig numerics;

  bool operator==(const ScenarioConfig&) const = default;
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

// A configuration that satisfied every invariant at construction. Only
// validate() creates one, so holders never need to re-check.
class ValidatedScenario {
 public:
  const ScenarioConfig& config() const { return config_; }
  const RadioParams& radio() const { return config_.radio; }
  const PopulationParams& population() const { return config_.population; }
  const SchedulingParams& scheduling() const { return config_.scheduling; }
  const QosTargets& qos() const { return config_.qos; }
  const BsEnergyModel& energy() const { return config_.energy; }
  const HarvestCurve& harvest() const { return config_.harvest; }
  HarvestSources sources() const { return config_.sources; }
  const EhMode& mode() const { return config_.mode; }
  const NumericsConfig& numerics() const { return config_.numerics; }

  double side_loss() const { return config_.radio.side_loss(); }
  double mean_gain() const { return config_.radio.mean_gain(); }

  bool operator==(const ValidatedScenario&) const = default;

 private:
  friend ValidatedScenario validate(const ScenarioConfig& cfg);
  explicit ValidatedScenario(ScenarioConfig cfg);

  ScenarioConfig config_;
};

// Lists every violated invariant (with its field path) in one error.
ValidatedScenario validate(const ScenarioConfig& cfg);
ValidatedScenario validate(const ValidatedScenario& scenario);

// Power drawn by one BS at the given downlink utilization.
double bs_power(const BsEnergyModel& model, double utilization, double tx_power, double p_min);

// Energy-harvester transfer curve: received power -> harvested power.
double theta(const HarvestCurve& curve, double h_in);

}  // namespace swipt
