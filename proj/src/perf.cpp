#include "swipt/perf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace swipt::perf {

namespace {

constexpr double pi = std::numbers::pi;

// Panel edges in u = lambda_b pi r^2. Graded toward u = 0, where 1/C(r)
// vanishes only logarithmically, and stretched over the exponential tail.
constexpr std::array<double, 18> panel_edges = {0.0,  1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.2,  0.5,  1.0,
                                                2.0,  3.5,  5.5,  8.0,  12.0, 17.0, 24.0, 32.0, 40.0};

struct Node {
  double u;
  double weight;
};

// Composite 15-point Gauss-Legendre nodes over [0, upper].
std::vector<Node> composite_nodes(double upper) {
  using rule = boost::math::quadrature::gauss<double, 15>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  // Rescale the panel layout when the truncation mass differs from 40.
  const double scale = upper / panel_edges.back();
  std::vector<Node> nodes;
  nodes.reserve((panel_edges.size() - 1) * (2 * x.size() - 1));
  for (std::size_t p = 0; p + 1 < panel_edges.size(); ++p) {
    const double half = 0.5 * (panel_edges[p + 1] - panel_edges[p]) * scale;
    const double mid = 0.5 * (panel_edges[p + 1] + panel_edges[p]) * scale;
    nodes.push_back({mid, half * w[0]});
    for (std::size_t i = 1; i < x.size(); ++i) {
      nodes.push_back({mid - half * x[i], half * w[i]});
      nodes.push_back({mid + half * x[i], half * w[i]});
    }
  }
  return nodes;
}

const std::vector<Node>& nodes_for(double upper) {
  thread_local double cached_upper = -1.0;
  thread_local std::vector<Node> cached;
  if (upper != cached_upper) {
    cached = composite_nodes(upper);
    cached_upper = upper;
  }
  return cached;
}

template <class F>
double composite_gauss(const F& f, double upper) {
  double total = 0.0;
  for (const auto& n : nodes_for(upper)) total += n.weight * f(n.u);
  return total;
}

// f(r, y) e^{-u} / (z g(r)) as a function of u.
auto h_integrand(double y, double z, const std::function<double(double)>& g, const ValidatedScenario& s,
                 const geometry::KernelTable& kernel) {
  const auto& pop = s.population();
  const double users = pop.lambda_u * (y + pop.iot_fraction * (pop.duty_cycle - y));
  const double lambda_b = pop.lambda_b;
  return [=, &g, &kernel](double u) {
    if (u <= 0.0) return 0.0;
    const double r = std::sqrt(u / (pi * lambda_b));
    const double rate = g(r);
    if (!(rate > 0.0)) throw DivergenceError("H: rate vanishes at r = " + std::to_string(r) + " m");
    return users * kernel(r) * std::exp(-u) / (z * rate);
  };
}

void require_positive_weight(double w, const char* what) {
  if (!(w > 0.0) || !std::isfinite(w))
    throw DivergenceError(std::string(what) + ": GPS weight is zero, delays are unbounded");
}

}  // namespace

NonConvergence::NonConvergence(double last, double residual, int iterations)
    : ModelError("downlink fixed point did not converge after " + std::to_string(iterations) +
                 " iterations (last " + detail::to_sci(last) + ", residual " + detail::to_sci(residual) + ")"),
      last_(last), residual_(residual), iterations_(iterations) {}

double capacity(double r, double tx_power, double gain, double interference, const RadioParams& radio) {
  const double signal = tx_power * gain * std::pow(r, -radio.alpha);
  const double sinr = signal / (radio.noise_power() + interference);
  return radio.band() * std::log1p(sinr) / std::numbers::ln2;
}

double mean_interference(double r, const ValidatedScenario& s, double util_ratio) {
  const auto& radio = s.radio();
  return radio.tx_power * s.mean_gain() * s.population().lambda_b * 2.0 * pi *
         std::pow(r, 2.0 - radio.alpha) / (radio.reuse * (radio.alpha - 2.0)) * util_ratio;
}

double mean_user_power(const ValidatedScenario& s, double uplink_util) {
  const auto& pop = s.population();
  const auto& sch = s.scheduling();
  const double alpha = s.radio().alpha;
  const double bb = (1.0 - pop.iot_fraction) * sch.delta_u;
  const double iot = pop.duty_cycle * pop.iot_fraction;
  const double per_user = (bb * sch.p_bb + iot * sch.p_iot) / (bb + iot);
  return per_user * pop.lambda_b * pi * alpha / (alpha - 2.0) * uplink_util;
}

double h_operator(double y, double z, const std::function<double(double)>& g, const ValidatedScenario& s,
                  const geometry::KernelTable& kernel) {
  const double value = composite_gauss(h_integrand(y, z, g, s, kernel), s.numerics().truncation_mass);
  if (!std::isfinite(value)) throw DivergenceError("H: integral is not finite");
  return value;
}

double h_operator_adaptive(double y, double z, const std::function<double(double)>& g,
                           const ValidatedScenario& s, const geometry::KernelTable& kernel,
                           double rel_tol) {
  const auto f = h_integrand(y, z, g, s, kernel);
  const double mass = s.numerics().truncation_mass;
  // tanh-sinh near u = 0, where the integrand has a logarithmic cusp.
  thread_local boost::math::quadrature::tanh_sinh<double> endpoint_rule;
  double error = 0.0;
  double l1 = 0.0;
  const double head = endpoint_rule.integrate(f, 0.0, 1.0, rel_tol, &error, &l1);
  if (error > 10.0 * rel_tol * l1) throw QuadratureError("H", head, error);
  return head + integrate(f, 1.0, mass, rel_tol, "H");
}

double fair_weight(const ValidatedScenario& s) {
  const auto& radio = s.radio();
  const double delta_d = s.scheduling().delta_d;
  const double split = s.mode().split;
  if (!s.mode().power_splitting()) return delta_d * (1.0 - split);
  const double r_bar = 0.5 / std::sqrt(s.population().lambda_b);
  const double interference = mean_interference(r_bar, s, 1.0);
  const double split_rate =
      capacity(r_bar, (1.0 - split) * radio.tx_power, radio.gain, (1.0 - split) * interference, radio);
  const double full_rate = capacity(r_bar, radio.tx_power, radio.gain, interference, radio);
  return delta_d * split_rate / full_rate;
}

double downlink_weight(const ValidatedScenario& s) {
  const auto& w = s.scheduling().w_d;
  return w ? *w : fair_weight(s);
}

double downlink_map(double tau, double w_d, const ValidatedScenario& s, const geometry::KernelTable& kernel) {
  const auto& radio = s.radio();
  const double util = tau / s.qos().tau_d0;
  const std::function<double(double)> rate = [&](double r) {
    return capacity(r, radio.tx_power, radio.gain, mean_interference(r, s, util), radio);
  };
  return h_operator(w_d, w_d, rate, s, kernel);
}

DownlinkDelay solve_downlink_delay(const ValidatedScenario& s, const geometry::KernelTable& kernel) {
  const auto& num = s.numerics();
  const auto& radio = s.radio();
  const double tau_d0 = s.qos().tau_d0;
  const double w_d = downlink_weight(s);
  require_positive_weight(w_d, "downlink");

  const double tol = num.fp_tol_factor * tau_d0;
  // Beyond this the network is hopelessly overloaded; T grows linearly in tau
  // there, and a slope >= 1 would never settle.
  const double blow_up = 1e8 * tau_d0;

  // Everything but the interference level is fixed across iterations, so
  // tabulate it once per node. Same node set as h_operator.
  const auto& nodes = nodes_for(num.truncation_mass);
  const auto& pop = s.population();
  const double users = pop.lambda_u * (w_d + pop.iot_fraction * (pop.duty_cycle - w_d));
  std::vector<double> mass(nodes.size()), signal(nodes.size()), interference(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double r = std::sqrt(nodes[i].u / (pi * pop.lambda_b));
    mass[i] = nodes[i].weight * users * kernel(r) * std::exp(-nodes[i].u) / w_d;
    signal[i] = radio.tx_power * radio.gain * std::pow(r, -radio.alpha);
    interference[i] = mean_interference(r, s, 1.0);
  }
  const double noise = radio.noise_power();
  const double bits_per_nat = radio.band() / std::numbers::ln2;
  auto map = [&](double tau) {
    const double util = tau / tau_d0;
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double rate = bits_per_nat * std::log1p(signal[i] / (noise + interference[i] * util));
      if (!(rate > 0.0)) throw DivergenceError("H: downlink rate vanishes");
      total += mass[i] / rate;
    }
    return total;
  };

  DownlinkDelay out;
  double tau = map(0.0);
  double residual = 0.0;
  for (int it = 1; it <= num.fp_max_iter; ++it) {
    const double next = map(tau);
    residual = std::abs(next - tau);
    out.iterations = it;
    if (residual < tol) {
      tau = next;
      out.residual = residual;
      break;
    }
    tau = (1.0 - num.fp_damping) * tau + num.fp_damping * next;
    if (!(tau < blow_up)) throw DivergenceError("downlink fixed point diverges (utilization exceeds 1e8)");
    if (it == num.fp_max_iter) throw NonConvergence(tau, residual, it);
  }
  out.tau_d = tau;

  const double split = s.mode().split;
  if (s.mode().power_splitting()) {
    // IoT users decode only the (1 - nu) share, while the interference
    // level is the one the BB fixed point settled on.
    const double util = tau / tau_d0;
    const std::function<double(double)> rate = [&](double r) {
      return capacity(r, (1.0 - split) * radio.tx_power, radio.gain,
                      (1.0 - split) * mean_interference(r, s, util), radio);
    };
    out.tau_dI = h_operator(w_d, 1.0, rate, s, kernel);
  } else {
    if (!(split < 1.0)) throw DivergenceError("TS with eta = 1 leaves no time for IoT data");
    out.tau_dI = tau * w_d / (1.0 - split);
  }
  return out;
}

DownlinkDelay solve_downlink_delay(const ValidatedScenario& s) {
  return solve_downlink_delay(s, geometry::KernelTable(s.population().lambda_b));
}

UplinkDelay solve_uplink_delay(const ValidatedScenario& s, const geometry::KernelTable& kernel) {
  const auto& radio = s.radio();
  const double delta_u = s.scheduling().delta_u;
  const double p_iot = s.scheduling().p_iot;
  const std::function<double(double)> rate = [&](double r) { return capacity(r, p_iot, 1.0, 0.0, radio); };
  UplinkDelay out;
  out.tau_u = h_operator(delta_u, delta_u, rate, s, kernel);
  out.tau_uI = delta_u * out.tau_u;
  return out;
}

PerformanceReport evaluate(const ValidatedScenario& s, const geometry::KernelTable& kernel) {
  PerformanceReport rep;
  rep.w_d = downlink_weight(s);
  const auto down = solve_downlink_delay(s, kernel);
  const auto up = solve_uplink_delay(s, kernel);
  rep.tau_d = down.tau_d;
  rep.tau_dI = down.tau_dI;
  rep.iterations = down.iterations;
  rep.converged = true;
  rep.tau_u = up.tau_u;
  rep.tau_uI = up.tau_uI;
  rep.util_d = rep.tau_d / s.qos().tau_d0;
  rep.util_u = rep.tau_u / s.qos().tau_u0;
  rep.user_power = mean_user_power(s, std::min(rep.util_u, 1.0));
  return rep;
}

PerformanceReport evaluate(const ValidatedScenario& s) {
  return evaluate(s, geometry::KernelTable(s.population().lambda_b));
}

}  // namespace swipt::perf
