#pragma once

#include <functional>

#include "swipt/core.hpp"
#include "swipt/geometry.hpp"
#include "swipt/numerics.hpp"

// Analytic per-bit delay model: capacity, mean interference, the H operator
// and the downlink interference fixed point.

namespace swipt::perf {

class NonConvergence : public ModelError {
 public:
  NonConvergence(double last, double residual, int iterations);
  double last() const { return last_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double last_;
  double residual_;
  int iterations_;
};

struct PerformanceReport {
  double w_d = 0.0;     // downlink GPS weight actually used
  double tau_d = 0.0;   // s/bit, BB downlink
  double tau_dI = 0.0;  // s/bit, IoT downlink
  double tau_u = 0.0;   // s/bit, BB uplink
  double tau_uI = 0.0;  // s/bit, IoT uplink
  double util_d = 0.0;  // tau_d / tau_d0, uncapped
  double util_u = 0.0;  // tau_u / tau_u0, uncapped
  double user_power = 0.0;  // O-bar, W (at min(util_u, 1))
  int iterations = 0;
  bool converged = false;
};

// Shannon rate over one reuse band, bit/s.
double capacity(double r, double tx_power, double gain, double interference, const RadioParams& radio);

// Palm-mean interference at serving distance r when every BS transmits with
// the scenario's power for the fraction util_ratio of the time.
double mean_interference(double r, const ValidatedScenario& s, double util_ratio);

// O-bar: time-averaged power received from user transmissions.
double mean_user_power(const ValidatedScenario& s, double uplink_util);

// H(y, z, g) = int_0^inf f(r, y) exp(-lambda_b pi r^2) lambda_b 2 pi r / (z g(r)) dr.
//
// Evaluated in the serving-distance mass variable u = lambda_b pi r^2 on a
// fixed composite Gauss-Legendre rule over [0, truncation_mass]. A fixed node
// set keeps H a smooth function of g, which the fixed-point iteration needs.
double h_operator(double y, double z, const std::function<double(double)>& g, const ValidatedScenario& s,
                  const geometry::KernelTable& kernel);

// The same integral by adaptive Gauss-Kronrod (reference path).
double h_operator_adaptive(double y, double z, const std::function<double(double)>& g,
                           const ValidatedScenario& s, const geometry::KernelTable& kernel,
                           double rel_tol);

// Maximally fair downlink weight for the scenario's EH mode.
double fair_weight(const ValidatedScenario& s);

// Configured w_d, or the fair weight when none is configured.
double downlink_weight(const ValidatedScenario& s);

struct DownlinkDelay {
  double tau_d = 0.0;
  double tau_dI = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

// The downlink map T(tau) whose fixed point is tau_d.
double downlink_map(double tau, double w_d, const ValidatedScenario& s, const geometry::KernelTable& kernel);

DownlinkDelay solve_downlink_delay(const ValidatedScenario& s, const geometry::KernelTable& kernel);
DownlinkDelay solve_downlink_delay(const ValidatedScenario& s);

struct UplinkDelay {
  double tau_u = 0.0;
  double tau_uI = 0.0;
};

UplinkDelay solve_uplink_delay(const ValidatedScenario& s, const geometry::KernelTable& kernel);

PerformanceReport evaluate(const ValidatedScenario& s, const geometry::KernelTable& kernel);
PerformanceReport evaluate(const ValidatedScenario& s);

}  // namespace swipt::perf
