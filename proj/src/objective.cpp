#include "swipt/objective.hpp"

#include <algorithm>
#include <cmath>

namespace swipt::objective {

ScenarioConfig apply(ScenarioConfig cfg, const DecisionVector& d) {
  cfg.radio.tx_power = d.tx_power;
  cfg.population.lambda_b = d.lambda_b;
  cfg.mode.split = d.split;
  return cfg;
}

DecisionBox::DecisionBox(const ScenarioConfig& cfg, double lambda_span)
    : p_min_(cfg.radio.p_min), p_max_(cfg.radio.p_max) {
  const auto& pop = cfg.population;
  lambda_hi_ = pop.lambda_b_max;
  if (pop.min_users_per_bs > 0) lambda_hi_ = std::min(lambda_hi_, pop.lambda_u / pop.min_users_per_bs);
  lambda_lo_ = lambda_hi_ * lambda_span;
}

DecisionVector DecisionBox::decode(const std::array<double, 3>& gene) const {
  const auto unit = [](double v) { return std::clamp(v, 0.0, 1.0); };
  DecisionVector d;
  d.tx_power = p_min_ + unit(gene[0]) * (p_max_ - p_min_);
  d.lambda_b = lambda_lo_ * std::pow(lambda_hi_ / lambda_lo_, unit(gene[1]));
  d.split = unit(gene[2]);
  return d;
}

std::array<double, 3> DecisionBox::encode(const DecisionVector& d) const {
  return {p_max_ > p_min_ ? (d.tx_power - p_min_) / (p_max_ - p_min_) : 0.0,
          std::log(d.lambda_b / lambda_lo_) / std::log(lambda_hi_ / lambda_lo_), d.split};
}

double objective_value(const ValidatedScenario& s, const perf::PerformanceReport& perf) {
  const auto& e = s.energy();
  const auto& r = s.radio();
  return s.population().lambda_b * (e.q1 + perf.util_d * (e.q2 + e.q3 * (r.tx_power - r.p_min)));
}

FeasibilityReport check_feasibility(const ValidatedScenario& s, const perf::PerformanceReport& perf,
                                    double cdf_h) {
  const auto& pop = s.population();
  const auto& radio = s.radio();
  FeasibilityReport f;
  f.c1_dl = perf.util_d - 1.0;
  f.c1_ul = perf.util_u - 1.0;
  f.c2 = std::max(pop.lambda_b - pop.lambda_b_max, -pop.lambda_b);
  f.c3 = std::max(radio.tx_power - radio.p_max, radio.p_min - radio.tx_power);
  f.c4 = cdf_h - s.qos().mu;
  f.c5 = std::max(s.mode().split - 1.0, -s.mode().split);
  f.users_per_bs = pop.min_users_per_bs - pop.lambda_u / pop.lambda_b;
  const double worst = std::max({f.c1_dl, f.c1_ul, f.c2, f.c3, f.c4, f.c5, f.users_per_bs});
  f.feasible = worst <= FeasibilityReport::tolerance;
  f.objective = objective_value(s, perf);
  return f;
}

Evaluation evaluate(const ValidatedScenario& s) {
  const geometry::KernelTable kernel(s.population().lambda_b);
  Evaluation e;
  e.perf = perf::evaluate(s, kernel);
  e.cdf_h = harvest::cdf_h(harvest::build_profile(s, e.perf, kernel), s.qos().h0);
  e.feasibility = check_feasibility(s, e.perf, e.cdf_h);
  e.objective = e.feasibility.objective;
  return e;
}

double penalty_scale(const ScenarioConfig& cfg) {
  const auto& e = cfg.energy;
  return cfg.population.lambda_b_max * (e.q1 + e.q2 + e.q3 * (cfg.radio.p_max - cfg.radio.p_min));
}

double failure_score(const ScenarioConfig& cfg) { return 1e6 * penalty_scale(cfg); }

double fitness(const Evaluation& e, const ValidatedScenario& s, const FitnessWeights& w) {
  const auto pos = [](double x) { return std::max(x, 0.0); };
  const double outage = e.cdf_h - s.qos().mu;
  const double harvest_term = w.sign == PenaltySign::corrected ? w.k2 * pos(outage) : -w.k2 * std::min(outage, 0.0);
  return e.objective + w.k1 * pos(e.perf.util_u - 1.0) + harvest_term + w.k3 * pos(e.perf.util_d - 1.0);
}

FitnessResult fitness_at(const ScenarioConfig& base, const DecisionVector& d, const FitnessWeights& w) {
  FitnessResult out;
  try {
    const auto s = validate(apply(base, d));
    out.evaluation = evaluate(s);
    out.score = fitness(*out.evaluation, s, w);
  } catch (const ModelError& err) {
    out.evaluation.reset();
    out.error = err.what();
    out.score = failure_score(base);
  } catch (const ValidationError& err) {
    out.evaluation.reset();
    out.error = err.what();
    out.score = failure_score(base);
  }
  return out;
}

}  // namespace swipt::objective
