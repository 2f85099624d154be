#include "swipt/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "swipt/numerics.hpp"

namespace swipt::geometry {

namespace {

constexpr double pi = std::numbers::pi;

// u - sin(u) cos(u): the area of a circular segment of half-angle u per unit
// radius squared. The series avoids cancellation for thin segments.
double segment_shape(double u) {
  const double t = 2.0 * u;
  if (t >= 0.5) return 0.5 * (t - std::sin(t));
  double term = t * t * t / 6.0;
  double sum = 0.0;
  for (int k = 1; k <= 7; ++k) {
    sum += term;
    term *= -t * t / ((2 * k + 2) * (2 * k + 3));
  }
  return 0.5 * sum;
}

double center_distance(double r, double x, double theta) {
  // (x, theta) in polar coordinates against (0, -r).
  return std::sqrt(std::max(0.0, x * x + r * r + 2.0 * x * r * std::sin(theta)));
}

// Outer x-integration stops where exp(-lambda_b (pi x^2 - pi r^2)) < 1e-12;
// pi x^2 - pi r^2 lower-bounds A.
double outer_limit(double lambda_b, double r) {
  return std::sqrt(r * r + std::log(1e12) / (pi * lambda_b));
}

}  // namespace

double lens_area(double r, double x, double theta) {
  if (x <= 0.0 || r <= 0.0) return 0.0;
  const double d = center_distance(r, x, theta);
  if (d >= r + x) return 0.0;
  if (d <= std::abs(r - x)) {
    const double m = std::min(r, x);
    return pi * m * m;
  }
  // Half-chord from the triangle (d, r, x) by Kahan's stable Heron formula.
  std::array<double, 3> s{d, r, x};
  std::sort(s.begin(), s.end(), std::greater<>());
  const auto [a, b, c] = s;
  const double area = 0.25 * std::sqrt(std::max(
                                  0.0, (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))));
  const double h = 2.0 * area / d;
  const double a1 = std::atan2(h, (d * d + r * r - x * x) / (2.0 * d));
  const double a2 = std::atan2(h, (d * d + x * x - r * r) / (2.0 * d));
  return r * r * segment_shape(a1) + x * x * segment_shape(a2);
}

double overlap_area(double r, double x, double theta) {
  if (x <= 0.0) return 0.0;
  const double s = std::sin(theta);
  const double c = std::abs(std::cos(theta));
  const double full = pi * x * x;
  if (c == 0.0 && s < 0.0 && x == r) return 0.0;  // circles coincide
  // The arccos terms of the bracketed expression have exact arctangent forms,
  // acos((r + x s) / d) = atan2(x |cos|, r + x s), and the square-root term
  // splits into the two segments' triangles, leaving a sum of segments.
  const double lens = r * r * segment_shape(std::atan2(x * c, r + x * s)) +
                      x * x * segment_shape(std::atan2(r * c, x + r * s));
  return std::clamp(full - lens, std::max(0.0, full - pi * r * r), full);
}

double cell_mass(double lambda_b, double r, double rel_tol) {
  // integrate() is not const in this Boost, so each thread keeps its own rule.
  thread_local boost::math::quadrature::tanh_sinh<double> endpoint_rule;
  // The integrand depends on theta only through sin(theta), so the full turn
  // is twice the half turn [-pi/2, pi/2]. Its endpoints carry the tangency and
  // containment kinks, which tanh-sinh absorbs.
  auto inner = [&](double x) {
    if (x <= 0.0) return 0.0;
    auto h = [&](double theta) { return std::exp(-lambda_b * overlap_area(r, x, theta)); };
    double error = 0.0;
    double l1 = 0.0;
    const double value = endpoint_rule.integrate(h, -0.5 * pi, 0.5 * pi, 0.1 * rel_tol, &error, &l1);
    if (error > rel_tol * l1) throw QuadratureError("cell_mass inner", value, error);
    return 2.0 * x * value;
  };
  const double x_max = outer_limit(lambda_b, r);
  // Split at x = r and x = 2r, where the containment configuration changes.
  const double s1 = std::min(r, x_max);
  const double s2 = std::min(2.0 * r, x_max);
  return integrate(inner, {0.0, s1, s2, x_max}, rel_tol, "cell_mass outer");
}

namespace {

class UnitKernel {
 public:
  UnitKernel() {
    const double t0 = std::log(KernelTable::rho_min);
    const double t1 = std::log(KernelTable::rho_max);
    step_ = (t1 - t0) / (KernelTable::grid_points - 1);
    std::vector<double> values(KernelTable::grid_points);
    for (int i = 0; i < KernelTable::grid_points; ++i)
      values[i] = cell_mass(1.0, std::exp(t0 + i * step_), 1e-8);
    at_min_ = values.front();
    // The spline's own one-sided endpoint slope estimates are off by ~0.1%
    // near rho_max; central differences in ln(rho) are far better.
    auto slope = [](double t) {
      constexpr double h = 1e-3;
      return (cell_mass(1.0, std::exp(t + h), 1e-9) - cell_mass(1.0, std::exp(t - h), 1e-9)) / (2 * h);
    };
    spline_ = boost::math::interpolators::cardinal_cubic_b_spline<double>(
        values.begin(), values.end(), t0, step_, slope(t0), slope(t1));
  }

  double operator()(double rho) const {
    if (rho <= 0.0) return 1.0;
    if (rho < KernelTable::rho_min) {
      // J(0) = 1 (the empty disk vanishes and A reduces to pi x^2); the
      // deviation grows as rho^2.
      const double t = rho / KernelTable::rho_min;
      return 1.0 + (at_min_ - 1.0) * t * t;
    }
    if (rho > KernelTable::rho_max) return cell_mass(1.0, rho, 1e-8);
    return spline_(std::log(rho));
  }

 private:
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline_;
  double step_ = 0.0;
  double at_min_ = 1.0;
};

const UnitKernel& unit_kernel() {
  static const UnitKernel kernel;
  return kernel;
}

}  // namespace

KernelTable::KernelTable(double lambda_b)
    : lambda_b_(lambda_b), sqrt_lambda_b_(std::sqrt(lambda_b)) {
  unit_kernel();
}

double KernelTable::operator()(double r) const { return unit_kernel()(r * sqrt_lambda_b_) / lambda_b_; }

double KernelTable::unit(double rho) { return unit_kernel()(rho); }

double f_of_r(double lambda_u, double gamma, double phi, double y, double cell_mass) {
  return lambda_u * (y + gamma * (phi - y)) * cell_mass;
}

double cdf_r(double lambda_b, double r) { return -std::expm1(-lambda_b * pi * r * r); }

double cdf_r_inv(double lambda_b, double p) { return std::sqrt(-std::log1p(-p) / (lambda_b * pi)); }

double truncation_radius(double lambda_b, double mass) { return std::sqrt(mass / (pi * lambda_b)); }

}  // namespace swipt::geometry
