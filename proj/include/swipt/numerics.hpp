#pragma once

#include <cmath>
#include <initializer_list>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace swipt {

namespace detail {
inline std::string to_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}
}  // namespace detail

// Failure of the analytic model to produce a number (as opposed to an
// invalid configuration, which is a ValidationError).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public ModelError {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : ModelError(what + ": tolerance not met (estimate " + detail::to_sci(estimate) +
                   ", error " + detail::to_sci(error) + ")"),
        estimate_(estimate), error_(error) {}
  double estimate() const { return estimate_; }
  double error() const { return error_; }

 private:
  double estimate_;
  double error_;
};

class DivergenceError : public ModelError {
 public:
  using ModelError::ModelError;
};

// Adaptive 15-point Gauss-Kronrod on [a, b]. Throws QuadratureError when the
// error estimate stays above rel_tol times the L1 norm (with a small slack,
// since the Kronrod estimate is pessimistic for smooth integrands).
// With several breakpoints the pieces share one error budget, so a piece
// that carries a negligible share of the mass is not held to its own
// relative tolerance.
template <class F>
double integrate(const F& f, std::initializer_list<double> points, double rel_tol, const char* what,
                 unsigned max_depth = 18) {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  const double* prev = nullptr;
  for (const double& b : points) {
    if (prev && b > *prev) {
      double e = 0.0;
      double l = 0.0;
      try {
        value += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, *prev, b, max_depth, rel_tol,
                                                                              &e, &l);
      } catch (const boost::math::evaluation_error& ex) {
        throw DivergenceError(std::string(what) + ": " + ex.what());
      } catch (const std::domain_error& ex) {
        throw DivergenceError(std::string(what) + ": " + ex.what());
      }
      error += e;
      l1 += l;
    }
    prev = &b;
  }
  if (!std::isfinite(value)) throw DivergenceError(std::string(what) + ": integral is not finite");
  if (error > 10.0 * rel_tol * l1 && error > 1e-300) throw QuadratureError(what, value, error);
  return value;
}

template <class F>
double integrate(const F& f, double a, double b, double rel_tol, const char* what,
                 unsigned max_depth = 18) {
  return integrate(f, {a, b}, rel_tol, what, max_depth);
}

}  // namespace swipt
