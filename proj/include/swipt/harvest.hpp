#pragma once

#include "swipt/core.hpp"
#include "swipt/geometry.hpp"
#include "swipt/numerics.hpp"
#include "swipt/perf.hpp"

// Harvested-power model: the received-power decomposition F(r) + Z(r)/f(r,w_d)
// in the dense-IoT regime, its distribution over the serving distance, and the
// per-location expressions the simulator evaluates.

namespace swipt::harvest {

class InfeasibleProfile : public ModelError {
 public:
  using ModelError::ModelError;
};

// What a user at one location sees in one realization.
struct LocalState {
  double distance = 0.0;      // D, to the serving BS (m)
  double util_d = 0.0;        // downlink utilization of the serving BS, in [0, 1]
  double share = 1.0;         // K = 1 / (N_iot + w_d N_bb)
  double interference = 0.0;  // I: power from other BSs (W)
  double user_power = 0.0;    // O: power from user transmissions (W)
};

// Received power h_in (before the harvester curve), clamped at zero.
double pointwise_received_power(const EhMode& mode, const LocalState& local, const RadioParams& radio);

class HarvestProfile {
 public:
  HarvestProfile(const ValidatedScenario& s, const perf::PerformanceReport& perf,
                 const geometry::KernelTable& kernel);

  double F(double r) const;
  double Z(double r) const;
  // f(r, w_d): weighted mean number of other users in the serving cell.
  double cell_users(double r) const;
  // F + Z / f clamped at zero.
  double received(double r) const;
  double g(double r) const;

  // Serving distance at which the mass lambda_b pi r^2 equals u.
  double radius_at_mass(double u) const;
  // Serving distance beyond which a fraction q of users lie.
  double radius_at_survival(double q) const;
  // g sampled on the profile grid is nonincreasing.
  bool monotone_decreasing() const;

  double lambda_b() const { return lambda_b_; }
  double util_d() const { return util_; }
  double user_power() const { return user_power_; }
  const NumericsConfig& numerics() const { return numerics_; }

 private:
  EhMode mode_;
  HarvestCurve curve_;
  NumericsConfig numerics_;
  geometry::KernelTable kernel_;
  double tx_power_, alpha_, gain_, mean_gain_;
  double lambda_b_, users_per_area_;
  double util_;        // min(tau_d / tau_d0, 1)
  double k_ibar_;      // k * I-bar(r) = k_ibar_ * r^(2 - alpha)
  double user_power_;  // O-bar, zero unless user sources are enabled
};

HarvestProfile build_profile(const ValidatedScenario& s, const perf::PerformanceReport& perf,
                             const geometry::KernelTable& kernel);

// P[h <= h0] per the scenario's CDF form. The robust form integrates the
// serving-distance law over the sublevel set {r : g(r) <= h0}; the verbatim
// form is CDF_r(g^-1(h0)), i.e. the mass of the superlevel set.
double cdf_h(const HarvestProfile& profile, double h0);
double cdf_h_level_set(const HarvestProfile& profile, double h0);
// 1 - CDF_r(g^-1(h0)) with g^-1 by bisection; valid only for nonincreasing g.
double cdf_h_by_inverse(const HarvestProfile& profile, double h0);

}  // namespace swipt::harvest
