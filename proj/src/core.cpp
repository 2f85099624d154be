#include "swipt/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace swipt {

const char* to_string(EhModeKind kind) {
  switch (kind) {
    case EhModeKind::ts: return "ts";
    case EhModeKind::sps: return "sps";
    case EhModeKind::dps: return "dps";
  }
  return "?";
}

double RadioParams::side_loss() const {
  if (side_loss_override) return *side_loss_override;
  return 1.0 - (gain - 1.0) * aperture / (360.0 - aperture);
}

double RadioParams::mean_gain() const {
  return (gain * aperture + side_loss() * (360.0 - aperture)) / 360.0;
}

namespace {

std::string join_issues(const std::vector<ValidationIssue>& issues) {
  std::ostringstream os;
  os << "invalid scenario:";
  for (const auto& issue : issues) os << "\n  " << issue.field << ": " << issue.message;
  return os.str();
}

class IssueList {
 public:
  void require(bool ok, std::string field, std::string message) {
    if (!ok) issues_.push_back({std::move(field), std::move(message)});
  }
  bool empty() const { return issues_.empty(); }
  std::vector<ValidationIssue> take() { return std::move(issues_); }

 private:
  std::vector<ValidationIssue> issues_;
};

bool finite(double v) { return std::isfinite(v); }
bool in_unit(double v) { return finite(v) && v >= 0.0 && v <= 1.0; }

void check_radio(const RadioParams& r, IssueList& out) {
  out.require(finite(r.bandwidth) && r.bandwidth > 0, "radio.bandwidth", "must be positive");
  out.require(r.reuse >= 1, "radio.reuse", "must be an integer >= 1");
  out.require(finite(r.noise_psd) && r.noise_psd >= 0, "radio.noise_psd", "must be non-negative");
  out.require(finite(r.alpha) && r.alpha > 2.0, "radio.alpha", "path-loss exponent must exceed 2");
  out.require(finite(r.p_min) && r.p_min >= 0, "radio.P_min", "must be non-negative");
  out.require(finite(r.p_max) && r.p_max >= r.p_min, "radio.P_max", "must be >= radio.P_min");
  out.require(finite(r.tx_power) && r.tx_power >= r.p_min && r.tx_power <= r.p_max, "radio.P",
              "transmit power must lie in [P_min, P_max]");
  out.require(finite(r.gain) && r.gain > 0, "radio.G", "must be positive");
  const bool aperture_ok = finite(r.aperture) && r.aperture > 0 && r.aperture < 360;
  out.require(aperture_ok, "radio.aperture", "must lie in (0, 360) degrees");
  if (!aperture_ok) return;
  const double loss = r.side_loss();
  if (r.side_loss_override) {
    out.require(finite(loss) && loss >= 0, "radio.L", "side-lobe loss must be non-negative");
  } else {
    std::ostringstream msg;
    msg << "G=" << r.gain << " with aperture " << r.aperture
        << " deg gives negative side-lobe loss L=" << loss
        << "; reduce G or the aperture, or set radio.L explicitly";
    out.require(finite(loss) && loss >= 0, "radio.G/radio.aperture", msg.str());
  }
}

void check_population(const PopulationParams& p, IssueList& out) {
  out.require(finite(p.lambda_u) && p.lambda_u > 0, "population.lambda_u", "must be positive");
  out.require(finite(p.lambda_b) && p.lambda_b > 0, "population.lambda_b", "must be positive");
  out.require(in_unit(p.iot_fraction), "population.iot_fraction", "must lie in [0, 1]");
  out.require(finite(p.duty_cycle) && p.duty_cycle > 0 && p.duty_cycle <= 1,
              "population.duty_cycle", "must lie in (0, 1]");
  out.require(finite(p.min_users_per_bs) && p.min_users_per_bs >= 0,
              "population.min_users_per_bs", "must be non-negative");
  out.require(finite(p.lambda_b_max) && p.lambda_b_max > 0, "population.lambda_b_max",
              "must be positive");
}

void check_scheduling(const SchedulingParams& s, IssueList& out) {
  out.require(finite(s.delta_d) && s.delta_d > 0, "scheduling.delta_d", "must be positive");
  out.require(finite(s.delta_u) && s.delta_u > 0, "scheduling.delta_u", "must be positive");
  if (s.w_d) out.require(finite(*s.w_d) && *s.w_d > 0, "scheduling.w_d", "must be positive");
  out.require(finite(s.p_bb) && s.p_bb >= 0, "scheduling.P_bb", "must be non-negative");
  out.require(finite(s.p_iot) && s.p_iot > 0, "scheduling.P_iot", "must be positive");
}

void check_qos(const QosTargets& q, IssueList& out) {
  out.require(finite(q.tau_d0) && q.tau_d0 > 0, "qos.tau_d0", "must be positive");
  out.require(finite(q.tau_u0) && q.tau_u0 > 0, "qos.tau_u0", "must be positive");
  out.require(finite(q.h0) && q.h0 > 0, "qos.h0", "must be positive");
  out.require(finite(q.mu) && q.mu > 0 && q.mu <= 1, "qos.mu", "must lie in (0, 1]");
}

void check_energy(const BsEnergyModel& e, IssueList& out) {
  out.require(finite(e.q1) && e.q1 >= 0, "energy.q1", "must be non-negative");
  out.require(finite(e.q2) && e.q2 >= 0, "energy.q2", "must be non-negative");
  out.require(finite(e.q3) && e.q3 >= 0, "energy.q3", "must be non-negative");
}

void check_harvest(const HarvestCurve& h, IssueList& out) {
  if (h.kind == HarvestCurveKind::linear) {
    out.require(finite(h.xi) && h.xi > 0 && h.xi <= 1, "harvest.xi", "must lie in (0, 1]");
  } else {
    out.require(finite(h.h_max) && h.h_max > 0, "harvest.h_max", "must be positive");
    out.require(finite(h.h_s) && h.h_s >= 0, "harvest.h_s", "must be non-negative");
    out.require(finite(h.chi) && h.chi > 0, "harvest.chi", "must be positive");
    out.require(finite(h.iota), "harvest.iota", "must be finite");
  }
}

void check_numerics(const NumericsConfig& n, IssueList& out) {
  out.require(finite(n.quad_rel_tol) && n.quad_rel_tol > 0 && n.quad_rel_tol < 1,
              "numerics.quad_rel_tol", "must lie in (0, 1)");
  out.require(finite(n.truncation_mass) && n.truncation_mass >= 10, "numerics.truncation_mass",
              "must be at least 10");
  out.require(finite(n.fp_tol_factor) && n.fp_tol_factor > 0, "numerics.fp_tol_factor",
              "must be positive");
  out.require(finite(n.fp_damping) && n.fp_damping > 0 && n.fp_damping <= 1,
              "numerics.fp_damping", "must lie in (0, 1]");
  out.require(n.fp_max_iter >= 1, "numerics.fp_max_iter", "must be >= 1");
  out.require(n.profile_grid >= 16, "numerics.profile_grid", "must be >= 16");
}

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : std::invalid_argument(join_issues(issues)), issues_(std::move(issues)) {}

ValidatedScenario::ValidatedScenario(ScenarioConfig cfg) : config_(std::move(cfg)) {}

ValidatedScenario validate(const ScenarioConfig& cfg) {
  IssueList issues;
  check_radio(cfg.radio, issues);
  check_population(cfg.population, issues);
  check_scheduling(cfg.scheduling, issues);
  check_qos(cfg.qos, issues);
  check_energy(cfg.energy, issues);
  check_harvest(cfg.harvest, issues);
  issues.require(in_unit(cfg.mode.split), "mode.split", "split factor must lie in [0, 1]");
  check_numerics(cfg.numerics, issues);
  if (!issues.empty()) throw ValidationError(issues.take());
  return ValidatedScenario(cfg);
}

ValidatedScenario validate(const ValidatedScenario& scenario) { return validate(scenario.config()); }

double bs_power(const BsEnergyModel& model, double utilization, double tx_power, double p_min) {
  if (!(utilization >= 0.0 && utilization <= 1.0))
    throw std::domain_error("bs_power: utilization must lie in [0, 1]");
  return model.q1 + utilization * (model.q2 + model.q3 * (tx_power - p_min));
}

double theta(const HarvestCurve& curve, double h_in) {
  if (curve.kind == HarvestCurveKind::linear) return curve.xi * h_in;
  // Normalized sigmoid: zero at the sensitivity threshold, h_max at saturation.
  const double offset = std::exp(-curve.chi * curve.h_s + curve.iota);
  const double shape = (1.0 + offset) / (1.0 + std::exp(-curve.chi * h_in + curve.iota)) - 1.0;
  return std::max(curve.h_max / offset * shape, 0.0);
}

}  // namespace swipt
