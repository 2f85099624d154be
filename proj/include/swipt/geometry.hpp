#pragma once

// Stochastic-geometry kernels for the Poisson-Voronoi cell model.
//
// Coordinates are centred on the serving BS. The typical user sits at
// distance r from it, and a point at polar position (x, theta) belongs to the
// same cell when no other BS lies closer to it than the serving BS. Given the
// user's empty disk of radius r, that happens with probability
// exp(-lambda_b * A(r, x, theta)).

namespace swipt::geometry {

// Area of the intersection of the circle centred at (x, theta) with radius x
// and the circle centred at (0, -r) with radius r (standard two-circle form,
// from the centre distance alone).
double lens_area(double r, double x, double theta);

// A(r, x, theta): pi x^2 minus the lens, evaluated through the arccos
// expression of the cell-population integral rewritten in cancellation-free
// arctangent form.
double overlap_area(double r, double x, double theta);

// J(r) = int_0^inf int_0^2pi exp(-lambda_b A(r,x,theta)) x dtheta dx by nested
// adaptive quadrature. Throws QuadratureError when rel_tol is not reached.
double cell_mass(double lambda_b, double r, double rel_tol = 1e-8);

// J(r) for one BS density. J scales exactly as J(r; lambda_b) =
// J(r sqrt(lambda_b); 1) / lambda_b, so every table shares one dimensionless
// spline built on first use.
class KernelTable {
 public:
  static constexpr int grid_points = 256;
  static constexpr double rho_min = 1e-3;  // r sqrt(lambda_b)
  static constexpr double rho_max = 5.0;

  explicit KernelTable(double lambda_b);

  double lambda_b() const { return lambda_b_; }
  double operator()(double r) const;

  // The dimensionless kernel J(rho; 1).
  static double unit(double rho);

 private:
  double lambda_b_;
  double sqrt_lambda_b_;
};

// Weighted mean number of other active users in the serving cell:
// lambda_u [y + gamma (phi - y)] J.
double f_of_r(double lambda_u, double gamma, double phi, double y, double cell_mass);

// Serving-distance distribution of the nearest point of a PPP.
double cdf_r(double lambda_b, double r);
double cdf_r_inv(double lambda_b, double p);

// Radius beyond which the serving-distance tail mass is exp(-mass).
double truncation_radius(double lambda_b, double mass);

}  // namespace swipt::geometry
