#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "swipt/core.hpp"

// Monte Carlo measurement of ideal per-bit delays and harvested power on a
// torus. Coordinates are stored as fixed-point fractions of the side so that
// wrapped differences are exact: translating a realization leaves every
// measured statistic bit-identical.

namespace swipt::sim {

struct Point {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
};

struct User {
  Point at;
  bool iot = false;
  bool active = true;  // inactive IoT users neither receive nor transmit
  int cell = -1;       // index of the nearest BS
};

struct Realization {
  double side = 0.0;  // m
  std::vector<Point> bs;
  std::vector<int> band;  // reuse band per BS, used by ReuseMode::sampled
  std::vector<User> users;
  Point probe_offset;  // origin of the area-estimation lattice
};

enum class UserPowerMode { center_of_gravity, exact };
enum class ReuseMode { mean, sampled };

struct SimConfig {
  double side = 0.0;  // m; 0 picks sqrt(target_bs / lambda_b)
  double target_bs = 100.0;
  int replications = 30;
  std::uint64_t seed = 1;
  bool delays = true;
  bool harvest = true;
  std::vector<double> harvest_grid;  // W; empty means {h0}
  UserPowerMode user_power = UserPowerMode::exact;
  ReuseMode reuse = ReuseMode::mean;
  int probes_per_bs = 64;
  int jobs = 1;
};

class SimConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Region side actually used for the scenario (m).
double region_side(const ValidatedScenario& s, const SimConfig& sim);
void check(const ValidatedScenario& s, const SimConfig& sim);

// Draws BS and user PPPs, marks IoT/active users and associates every user
// with its nearest BS. May return a realization without BSs.
Realization draw_realization(const ValidatedScenario& s, double side, std::mt19937_64& rng);

Realization translated(Realization r, Point shift);

// Nearest BS by wrapped distance; ties go to the lower index.
int nearest_bs(const Realization& r, Point at);
void associate(Realization& r);

// Wrapped distance (m).
double distance(const Realization& r, Point a, Point b);

// Time-averaged power received at `at` from user uplink transmissions, for an
// uplink utilization `util_u` (already capped). The centre-of-gravity form
// places each cell's transmissions at the mean position of its active users.
// In the exact form, user index `self` (the receiver) is left out.
double exact_user_power(const ValidatedScenario& s, const Realization& r, Point at, double util_u,
                        UserPowerMode mode = UserPowerMode::exact, int self = -1);

struct ReplicationSummary {
  int bs = 0;
  int users = 0;
  int active_iot = 0;
  int redraws = 0;  // realizations discarded for having no BS
  double tau_d = 0.0, tau_dI = 0.0, tau_u = 0.0, tau_uI = 0.0;  // s/bit
  double util_d = 0.0, util_u = 0.0;
  std::vector<double> cdf;  // at the harvest grid; NaN without active IoT users
};

// Measures one realization. Delays are the area-weighted means of the per-user
// ideal delays; U_d is solved self-consistently from the measured tau_d.
ReplicationSummary measure(const ValidatedScenario& s, const Realization& r, const SimConfig& sim);

struct Interval {
  double mean = 0.0;
  double half_width = 0.0;  // 95% Student-t
  int samples = 0;

  double lo() const { return mean - half_width; }
  double hi() const { return mean + half_width; }
};

Interval confidence_interval(const std::vector<double>& values);

struct SimReport {
  double side = 0.0;
  Interval tau_d, tau_dI, tau_u, tau_uI, util_d, util_u;
  Interval users_per_bs;
  std::vector<double> harvest_grid;
  std::vector<Interval> cdf;
  std::vector<ReplicationSummary> replications;
  long redraws = 0;
  double mean_bs = 0.0, mean_users = 0.0;
};

SimReport run_sim(const ValidatedScenario& s, const SimConfig& sim);

}  // namespace swipt::sim
