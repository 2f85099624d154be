#pragma once

#include <array>
#include <optional>
#include <string>

#include "swipt/core.hpp"
#include "swipt/harvest.hpp"
#include "swipt/perf.hpp"

// Network power-density objective, constraint slacks and the penalty fitness.

namespace swipt::objective {

struct DecisionVector {
  double tx_power = 0.0;  // W
  double lambda_b = 0.0;  // m^-2
  double split = 0.0;     // eta (TS) or nu (SPS/DPS)

  bool operator==(const DecisionVector&) const = default;
};

ScenarioConfig apply(ScenarioConfig cfg, const DecisionVector& d);

// Search box in normalized coordinates [0,1]^3. lambda_b is decoded on a log
// scale over [lambda_hi * span, lambda_hi], where lambda_hi also honours the
// users-per-BS floor lambda_u / m_min.
class DecisionBox {
 public:
  static constexpr double default_span = 1e-3;

  explicit DecisionBox(const ScenarioConfig& cfg, double lambda_span = default_span);

  DecisionVector decode(const std::array<double, 3>& gene) const;
  std::array<double, 3> encode(const DecisionVector& d) const;

  double lambda_lo() const { return lambda_lo_; }
  double lambda_hi() const { return lambda_hi_; }

 private:
  double p_min_, p_max_, lambda_lo_, lambda_hi_;
};

// Signed slacks; <= 0 means satisfied.
struct FeasibilityReport {
  double c1_dl = 0.0;  // U_d - 1
  double c1_ul = 0.0;  // U_u - 1
  double c2 = 0.0;     // lambda_b outside (0, lambda_b_max]
  double c3 = 0.0;     // P outside [P_min, P_max]
  double c4 = 0.0;     // CDF_h(h0) - mu
  double c5 = 0.0;     // split outside [0, 1]
  double users_per_bs = 0.0;  // m_min - lambda_u / lambda_b
  bool feasible = false;
  double objective = 0.0;  // W/m^2

  static constexpr double tolerance = 1e-9;
};

struct Evaluation {
  perf::PerformanceReport perf;
  double cdf_h = 0.0;
  double objective = 0.0;  // W/m^2
  FeasibilityReport feasibility;
};

// lambda_b [q1 + U_d (q2 + q3 (P - P_min))] with U_d uncapped.
double objective_value(const ValidatedScenario& s, const perf::PerformanceReport& perf);

FeasibilityReport check_feasibility(const ValidatedScenario& s, const perf::PerformanceReport& perf, double cdf_h);

// Full analytic evaluation. Throws ModelError when the model has no answer.
Evaluation evaluate(const ValidatedScenario& s);

enum class PenaltySign { corrected, verbatim };

struct FitnessWeights {
  double k1 = 1000.0;
  double k2 = 5000.0;
  double k3 = 1000.0;
  PenaltySign sign = PenaltySign::corrected;

  bool operator==(const FitnessWeights&) const = default;
};

// lambda_b,max [q1 + q2 + q3 (P_max - P_min)]: the largest objective value.
double penalty_scale(const ScenarioConfig& cfg);

// Score assigned to decisions the model cannot evaluate.
double failure_score(const ScenarioConfig& cfg);

double fitness(const Evaluation& e, const ValidatedScenario& s, const FitnessWeights& w);

struct FitnessResult {
  double score = 0.0;
  std::optional<Evaluation> evaluation;  // empty when the model failed
  std::string error;
};

// Fitness at a decision; model and validation failures become failure_score.
FitnessResult fitness_at(const ScenarioConfig& base, const DecisionVector& d, const FitnessWeights& w);

}  // namespace swipt::objective
