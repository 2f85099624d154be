#include "swipt/harvest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace swipt::harvest {

namespace {

constexpr double pi = std::numbers::pi;

// Bisection for the level crossing between a (on side a_below) and b.
template <class G>
double crossing(const G& below, double a, double b, bool a_below) {
  for (int i = 0; i < 60 && std::abs(b - a) > 1e-15; ++i) {
    const double mid = 0.5 * (a + b);
    (below(mid) == a_below ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

}  // namespace

double pointwise_received_power(const EhMode& mode, const LocalState& l, const RadioParams& radio) {
  const double beam = radio.tx_power * std::pow(l.distance, -radio.alpha) * l.util_d;
  const double ambient = l.interference + l.user_power;
  const double side = radio.mean_gain() * (1.0 - l.share);
  const double x = mode.split;
  double h = 0.0;
  switch (mode.kind) {
    case EhModeKind::ts:
      h = beam * (radio.gain * x * l.share + side) + (1.0 - l.share * l.util_d * (1.0 - x)) * ambient;
      break;
    case EhModeKind::sps:
      h = x * beam * (radio.gain * l.share + side) + x * ambient;
      break;
    case EhModeKind::dps:
      h = beam * (radio.gain * x * l.share + side) + ambient;
      break;
  }
  return std::max(h, 0.0);
}

HarvestProfile::HarvestProfile(const ValidatedScenario& s, const perf::PerformanceReport& perf,
                               const geometry::KernelTable& kernel)
    : mode_(s.mode()), curve_(s.harvest()), numerics_(s.numerics()), kernel_(kernel) {
  const auto& radio = s.radio();
  const auto& pop = s.population();
  tx_power_ = radio.tx_power;
  alpha_ = radio.alpha;
  gain_ = radio.gain;
  mean_gain_ = s.mean_gain();
  lambda_b_ = pop.lambda_b;
  users_per_area_ = pop.lambda_u * (perf.w_d + pop.iot_fraction * (pop.duty_cycle - perf.w_d));
  if (!(users_per_area_ > 0.0))
    throw InfeasibleProfile("harvest profile: no users share the serving cell (f(r, w_d) = 0)");
  util_ = std::min(perf.util_d, 1.0);
  const bool bs_sources = s.sources() != HarvestSources::active_only;
  const bool user_sources = s.sources() == HarvestSources::all;
  k_ibar_ = bs_sources ? radio.reuse * perf::mean_interference(1.0, s, util_) : 0.0;
  user_power_ = user_sources ? perf.user_power : 0.0;
}

double HarvestProfile::F(double r) const {
  const double ts = tx_power_ * std::pow(r, -alpha_) * mean_gain_ * util_ + k_ibar_ * std::pow(r, 2.0 - alpha_) +
                    user_power_;
  return mode_.kind == EhModeKind::sps ? mode_.split * ts : ts;
}

double HarvestProfile::Z(double r) const {
  const double beam = tx_power_ * std::pow(r, -alpha_) * util_;
  const double x = mode_.split;
  switch (mode_.kind) {
    case EhModeKind::ts:
      return beam * (gain_ * x - mean_gain_) -
             util_ * (1.0 - x) * (k_ibar_ * std::pow(r, 2.0 - alpha_) + user_power_);
    case EhModeKind::sps: return x * beam * (gain_ - mean_gain_);
    case EhModeKind::dps: return beam * (x * gain_ - mean_gain_);
  }
  return 0.0;
}

double HarvestProfile::cell_users(double r) const { return users_per_area_ * kernel_(r); }

double HarvestProfile::received(double r) const { return std::max(F(r) + Z(r) / cell_users(r), 0.0); }

double HarvestProfile::g(double r) const { return theta(curve_, received(r)); }

double HarvestProfile::radius_at_mass(double u) const { return std::sqrt(u / (pi * lambda_b_)); }

double HarvestProfile::radius_at_survival(double q) const { return radius_at_mass(-std::log(q)); }

bool HarvestProfile::monotone_decreasing() const {
  const int n = numerics_.profile_grid;
  const double q_min = std::exp(-numerics_.truncation_mass);
  double prev = g(radius_at_survival(1.0 - 1e-12));
  for (int i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double cur = g(radius_at_survival((1.0 - 1e-12) * (1.0 - t) + q_min * t));
    if (cur > prev * (1.0 + 1e-12) + 1e-300) return false;
    prev = cur;
  }
  return true;
}

HarvestProfile build_profile(const ValidatedScenario& s, const perf::PerformanceReport& perf,
                             const geometry::KernelTable& kernel) {
  return HarvestProfile(s, perf, kernel);
}

double cdf_h_level_set(const HarvestProfile& profile, double h0) {
  // Work in the survival mass q = 1 - CDF_r(r), under which the Rayleigh law
  // is uniform: the answer is the length of {q : g(r(q)) <= h0}.
  const int n = profile.numerics().profile_grid;
  const double q_min = std::exp(-profile.numerics().truncation_mass);
  constexpr double q_max = 1.0 - 1e-12;
  auto below = [&](double q) { return profile.g(profile.radius_at_survival(q)) <= h0; };

  double prev_q = q_max;
  bool prev_below = below(prev_q);
  double mass = prev_below ? 1.0 - q_max : 0.0;
  for (int i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double q = q_max * (1.0 - t) + q_min * t;
    const bool cur_below = below(q);
    if (cur_below == prev_below) {
      if (cur_below) mass += prev_q - q;
    } else {
      const double c = crossing(below, prev_q, q, prev_below);
      mass += prev_below ? prev_q - c : c - q;
    }
    prev_q = q;
    prev_below = cur_below;
  }
  if (prev_below) mass += q_min;
  return std::clamp(mass, 0.0, 1.0);
}

double cdf_h_by_inverse(const HarvestProfile& profile, double h0) {
  const double q_min = std::exp(-profile.numerics().truncation_mass);
  auto g_at = [&](double q) { return profile.g(profile.radius_at_survival(q)); };
  double near = 1.0 - 1e-12;  // r -> 0
  double far = q_min;
  if (g_at(near) <= h0) return 1.0;
  if (g_at(far) > h0) return 0.0;
  for (int i = 0; i < 100 && near - far > 1e-15; ++i) {
    const double mid = 0.5 * (near + far);
    (g_at(mid) > h0 ? near : far) = mid;
  }
  // CDF_r(g^-1(h0)) = 1 - q at the crossing.
  return 0.5 * (near + far);
}

double cdf_h(const HarvestProfile& profile, double h0) {
  const double level = cdf_h_level_set(profile, h0);
  return profile.numerics().cdf_form == CdfForm::verbatim ? 1.0 - level : level;
}

}  // namespace swipt::harvest
