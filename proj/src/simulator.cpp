#include "swipt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "swipt/harvest.hpp"
#include "swipt/parallel.hpp"
#include "swipt/perf.hpp"

namespace swipt::sim {

namespace {

constexpr double ticks = 4294967296.0;  // 2^32 fixed-point steps per side

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

// Signed wrapped offset b - a in ticks, in [-2^31, 2^31).
std::int32_t offset(std::uint32_t a, std::uint32_t b) { return static_cast<std::int32_t>(b - a); }

double squared_ticks(Point a, Point b) {
  const double dx = offset(a.x, b.x);
  const double dy = offset(a.y, b.y);
  return dx * dx + dy * dy;
}

double wrap(double v, double side) {
  if (v >= 0.5 * side) return v - side;
  if (v < -0.5 * side) return v + side;
  return v;
}

// Where a cell's uplink transmissions come from: a position relative to its
// BS (kept in ticks plus a metric offset so translation cannot perturb it)
// and the GPS-weighted mean transmit power.
struct Source {
  Point anchor;
  double dx = 0.0, dy = 0.0;  // m
  double power = 0.0;         // W
  int user = -1;              // transmitting user in the exact form
};

struct CellCounts {
  std::vector<int> bb, iot;  // active users only
};

CellCounts count_cells(const Realization& r) {
  CellCounts c{std::vector<int>(r.bs.size(), 0), std::vector<int>(r.bs.size(), 0)};
  for (const auto& u : r.users) {
    if (!u.active) continue;
    (u.iot ? c.iot : c.bb)[u.cell]++;
  }
  return c;
}

std::vector<Source> uplink_sources(const ValidatedScenario& s, const Realization& r, UserPowerMode mode) {
  const auto& sch = s.scheduling();
  const double scale = r.side / ticks;
  std::vector<Source> out;
  if (mode == UserPowerMode::exact) {
    const auto counts = count_cells(r);
    for (std::size_t i = 0; i < r.users.size(); ++i) {
      const auto& u = r.users[i];
      if (!u.active) continue;
      const double weight_sum = sch.delta_u * counts.bb[u.cell] + counts.iot[u.cell];
      const double share = (u.iot ? 1.0 : sch.delta_u) / weight_sum;
      out.push_back({u.at, 0.0, 0.0, share * (u.iot ? sch.p_iot : sch.p_bb), static_cast<int>(i)});
    }
    return out;
  }
  const std::size_t m = r.bs.size();
  std::vector<double> sx(m, 0.0), sy(m, 0.0);
  std::vector<int> bb(m, 0), iot(m, 0);
  for (const auto& u : r.users) {
    if (!u.active) continue;
    const auto& b = r.bs[u.cell];
    sx[u.cell] += offset(b.x, u.at.x) * scale;
    sy[u.cell] += offset(b.y, u.at.y) * scale;
    (u.iot ? iot : bb)[u.cell]++;
  }
  for (std::size_t j = 0; j < m; ++j) {
    const int n = bb[j] + iot[j];
    if (n == 0) continue;
    const double weight_sum = sch.delta_u * bb[j] + iot[j];
    out.push_back({r.bs[j], sx[j] / n, sy[j] / n, (sch.delta_u * bb[j] * sch.p_bb + iot[j] * sch.p_iot) / weight_sum});
  }
  return out;
}

// A user does not harvest its own transmissions: `self` is skipped.
double received_from(const std::vector<Source>& sources, const Realization& r, Point at, double alpha, int self) {
  const double scale = r.side / ticks;
  double total = 0.0;
  for (const auto& src : sources) {
    if (self >= 0 && src.user == self) continue;
    const double dx = wrap(offset(at.x, src.anchor.x) * scale + src.dx, r.side);
    const double dy = wrap(offset(at.y, src.anchor.y) * scale + src.dy, r.side);
    const double d2 = dx * dx + dy * dy;
    total += src.power * (d2 <= 1.0 ? 1.0 : std::pow(d2, -0.5 * alpha));
  }
  return total;
}

std::vector<double> cell_areas(const Realization& r, int probes_per_bs) {
  std::vector<double> area(r.bs.size(), 0.0);
  const auto side_probes = static_cast<std::uint64_t>(
      std::ceil(std::sqrt(static_cast<double>(probes_per_bs) * static_cast<double>(r.bs.size()))));
  for (std::uint64_t i = 0; i < side_probes; ++i) {
    for (std::uint64_t j = 0; j < side_probes; ++j) {
      const Point p{r.probe_offset.x + static_cast<std::uint32_t>((i << 32) / side_probes),
                    r.probe_offset.y + static_cast<std::uint32_t>((j << 32) / side_probes)};
      area[nearest_bs(r, p)] += 1.0;
    }
  }
  const double total = static_cast<double>(side_probes * side_probes);
  for (auto& a : area) a /= total;
  return area;
}

}  // namespace

double region_side(const ValidatedScenario& s, const SimConfig& sim) {
  return sim.side > 0.0 ? sim.side : std::sqrt(sim.target_bs / s.population().lambda_b);
}

void check(const ValidatedScenario& s, const SimConfig& sim) {
  std::ostringstream issues;
  const double side = region_side(s, sim);
  if (!(side * side * s.population().lambda_b >= 20.0))
    issues << " sim.side gives fewer than 20 expected BSs;";
  if (sim.replications < 2) issues << " sim.replications must be >= 2;";
  if (sim.probes_per_bs < 1) issues << " sim.probes_per_bs must be >= 1;";
  if (sim.jobs < 1) issues << " sim.jobs must be >= 1;";
  for (double h : sim.harvest_grid)
    if (!(h >= 0.0)) issues << " sim.harvest_grid values must be >= 0;";
  if (!issues.str().empty()) throw SimConfigError("invalid simulation configuration:" + issues.str());
}

Realization draw_realization(const ValidatedScenario& s, double side, std::mt19937_64& rng) {
  const auto& pop = s.population();
  const double area = side * side;
  auto coordinate = [&] { return static_cast<std::uint32_t>(rng() >> 32); };
  Realization r;
  r.side = side;
  const long n_bs = std::poisson_distribution<long>(pop.lambda_b * area)(rng);
  const long n_users = std::poisson_distribution<long>(pop.lambda_u * area)(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> band(0, s.radio().reuse - 1);
  r.bs.resize(n_bs);
  r.band.resize(n_bs);
  for (long j = 0; j < n_bs; ++j) {
    r.bs[j] = {coordinate(), coordinate()};
    r.band[j] = band(rng);
  }
  r.users.resize(n_users);
  for (auto& u : r.users) {
    u.at = {coordinate(), coordinate()};
    u.iot = unit(rng) < pop.iot_fraction;
    u.active = !u.iot || unit(rng) < pop.duty_cycle;
  }
  r.probe_offset = {coordinate(), coordinate()};
  associate(r);
  return r;
}

Realization translated(Realization r, Point shift) {
  auto move = [&](Point& p) {
    p.x += shift.x;
    p.y += shift.y;
  };
  for (auto& b : r.bs) move(b);
  for (auto& u : r.users) move(u.at);
  move(r.probe_offset);
  return r;
}

int nearest_bs(const Realization& r, Point at) {
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < r.bs.size(); ++j) {
    const double d2 = squared_ticks(at, r.bs[j]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = static_cast<int>(j);
    }
  }
  return best;
}

void associate(Realization& r) {
  for (auto& u : r.users) u.cell = nearest_bs(r, u.at);
}

double distance(const Realization& r, Point a, Point b) { return std::sqrt(squared_ticks(a, b)) * r.side / ticks; }

double exact_user_power(const ValidatedScenario& s, const Realization& r, Point at, double util_u,
                        UserPowerMode mode, int self) {
  return util_u * received_from(uplink_sources(s, r, mode), r, at, s.radio().alpha, self);
}

ReplicationSummary measure(const ValidatedScenario& s, const Realization& r, const SimConfig& sim) {
  const auto& radio = s.radio();
  const auto& sch = s.scheduling();
  const auto& num = s.numerics();
  const double tau_d0 = s.qos().tau_d0;
  const double w_d = perf::downlink_weight(s);
  const double split = s.mode().split;
  const bool ps = s.mode().power_splitting();
  const double mean_gain = s.mean_gain();

  ReplicationSummary out;
  out.bs = static_cast<int>(r.bs.size());
  out.users = static_cast<int>(r.users.size());
  const auto counts = count_cells(r);
  const auto area = cell_areas(r, sim.probes_per_bs);
  const std::size_t n = r.users.size();

  // Per user: serving distance, co-band interference (to scale by U_d) and
  // total received BS power (for harvesting).
  std::vector<double> serving(n), co_band(n), total_bs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& u = r.users[i];
    double same = 0.0, all = 0.0;
    for (std::size_t j = 0; j < r.bs.size(); ++j) {
      if (static_cast<int>(j) == u.cell) continue;
      const double p = radio.tx_power * mean_gain * std::pow(distance(r, u.at, r.bs[j]), -radio.alpha);
      all += p;
      if (r.band[j] == r.band[u.cell]) same += p;
    }
    serving[i] = distance(r, u.at, r.bs[u.cell]);
    total_bs[i] = all;
    co_band[i] = sim.reuse == ReuseMode::mean ? all / radio.reuse : same;
  }

  std::vector<int> cell_users(r.bs.size(), 0);
  for (const auto& u : r.users) cell_users[u.cell]++;

  // Area-weighted mean over cells of the per-cell mean over user locations.
  auto area_mean = [&](auto&& per_user) {
    std::vector<double> sum(r.bs.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) sum[r.users[i].cell] += per_user(i);
    double total = 0.0;
    for (std::size_t j = 0; j < r.bs.size(); ++j)
      if (cell_users[j] > 0) total += area[j] * sum[j] / cell_users[j];
    return total;
  };
  auto weight_d = [&](std::size_t i) {
    const int c = r.users[i].cell;
    return counts.iot[c] + w_d * counts.bb[c];
  };
  auto tau_d_at = [&](double util) {
    return area_mean([&](std::size_t i) {
      return weight_d(i) / (w_d * perf::capacity(serving[i], radio.tx_power, radio.gain, util * co_band[i], radio));
    });
  };

  // U_d enters the interference; settle it the same way the analytic model does.
  double tau = tau_d_at(0.0);
  const double tol = num.fp_tol_factor * tau_d0;
  for (int it = 1;; ++it) {
    const double next = tau_d_at(tau / tau_d0);
    const double residual = std::abs(next - tau);
    if (residual < tol) {
      tau = next;
      break;
    }
    tau = (1.0 - num.fp_damping) * tau + num.fp_damping * next;
    if (!(tau < 1e8 * tau_d0)) throw DivergenceError("simulated downlink utilization diverges");
    if (it == num.fp_max_iter) throw perf::NonConvergence(tau, residual, it);
  }
  const double util = tau / tau_d0;
  out.tau_d = tau;
  out.util_d = util;
  out.tau_dI = area_mean([&](std::size_t i) {
    const double I = util * co_band[i];
    if (ps)
      return weight_d(i) / perf::capacity(serving[i], (1.0 - split) * radio.tx_power, radio.gain, (1.0 - split) * I,
                                          radio);
    return weight_d(i) / ((1.0 - split) * perf::capacity(serving[i], radio.tx_power, radio.gain, I, radio));
  });
  out.tau_u = area_mean([&](std::size_t i) {
    const int c = r.users[i].cell;
    const double weight = counts.iot[c] + sch.delta_u * counts.bb[c];
    return weight / (sch.delta_u * perf::capacity(serving[i], sch.p_iot, 1.0, 0.0, radio));
  });
  out.tau_uI = sch.delta_u * out.tau_u;
  out.util_u = out.tau_u / s.qos().tau_u0;

  if (!sim.delays) out.tau_d = out.tau_dI = out.tau_u = out.tau_uI = nan();

  std::vector<double> grid = sim.harvest_grid;
  if (grid.empty()) grid.push_back(s.qos().h0);
  out.cdf.assign(grid.size(), nan());
  if (!sim.harvest) return out;

  const double util_d = std::min(util, 1.0);
  const double util_u = std::min(out.util_u, 1.0);
  const bool bs_sources = s.sources() != HarvestSources::active_only;
  const bool user_sources = s.sources() == HarvestSources::all;
  const auto sources = user_sources ? uplink_sources(s, r, sim.user_power) : std::vector<Source>{};
  std::vector<long> below(grid.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& u = r.users[i];
    if (!u.iot || !u.active) continue;
    ++out.active_iot;
    harvest::LocalState local;
    local.distance = serving[i];
    local.util_d = util_d;
    local.share = 1.0 / weight_d(i);
    local.interference = bs_sources ? util_d * total_bs[i] : 0.0;
    local.user_power = user_sources ? util_u * received_from(sources, r, u.at, radio.alpha, static_cast<int>(i)) : 0.0;
    const double h = theta(s.harvest(), harvest::pointwise_received_power(s.mode(), local, radio));
    for (std::size_t g = 0; g < grid.size(); ++g) below[g] += h <= grid[g];
  }
  if (out.active_iot > 0)
    for (std::size_t g = 0; g < grid.size(); ++g) out.cdf[g] = static_cast<double>(below[g]) / out.active_iot;
  return out;
}

Interval confidence_interval(const std::vector<double>& values) {
  Interval ci;
  std::vector<double> v;
  for (double x : values)
    if (std::isfinite(x)) v.push_back(x);
  ci.samples = static_cast<int>(v.size());
  if (v.empty()) {
    ci.mean = ci.half_width = nan();
    return ci;
  }
  ci.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  if (v.size() < 2) {
    ci.half_width = nan();
    return ci;
  }
  double ss = 0.0;
  for (double x : v) ss += (x - ci.mean) * (x - ci.mean);
  const double sd = std::sqrt(ss / (v.size() - 1));
  const boost::math::students_t t(static_cast<double>(v.size() - 1));
  ci.half_width = boost::math::quantile(t, 0.975) * sd / std::sqrt(static_cast<double>(v.size()));
  return ci;
}

SimReport run_sim(const ValidatedScenario& s, const SimConfig& sim) {
  check(s, sim);
  SimReport rep;
  rep.side = region_side(s, sim);
  rep.harvest_grid = sim.harvest_grid;
  if (rep.harvest_grid.empty()) rep.harvest_grid.push_back(s.qos().h0);
  rep.replications.resize(sim.replications);
  parallel_for(sim.replications, sim.jobs, [&](std::size_t k) {
    std::mt19937_64 rng(substream_seed(sim.seed, k));
    int redraws = 0;
    Realization r = draw_realization(s, rep.side, rng);
    while (r.bs.empty()) {
      ++redraws;
      r = draw_realization(s, rep.side, rng);
    }
    auto& out = rep.replications[k];
    out = measure(s, r, sim);
    out.redraws = redraws;
  });

  auto column = [&](auto field) {
    std::vector<double> v;
    for (const auto& r : rep.replications) v.push_back(field(r));
    return confidence_interval(v);
  };
  rep.tau_d = column([](const auto& r) { return r.tau_d; });
  rep.tau_dI = column([](const auto& r) { return r.tau_dI; });
  rep.tau_u = column([](const auto& r) { return r.tau_u; });
  rep.tau_uI = column([](const auto& r) { return r.tau_uI; });
  rep.util_d = column([](const auto& r) { return r.util_d; });
  rep.util_u = column([](const auto& r) { return r.util_u; });
  rep.users_per_bs = column([](const auto& r) { return static_cast<double>(r.users) / r.bs; });
  for (std::size_t g = 0; g < rep.harvest_grid.size(); ++g)
    rep.cdf.push_back(column([g](const auto& r) { return r.cdf[g]; }));
  for (const auto& r : rep.replications) {
    rep.redraws += r.redraws;
    rep.mean_bs += r.bs;
    rep.mean_users += r.users;
  }
  rep.mean_bs /= sim.replications;
  rep.mean_users /= sim.replications;
  return rep;
}

}  // namespace swipt::sim
