#pragma once

// Gauss-Legendre rules and the unit-mass bump functions used for mollification.

#include <cstddef>
#include <vector>

namespace euler2d {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

/// phi1(t) = c1 exp(-1 / (1 - 4 t^2)) on |t| < 1/2, unit integral on R.
double bump1(double t);
/// Radial profile of phi2(x) = c2 exp(-1 / (1 - 4 |x|^2)) on |x| < 1/2, unit
/// integral on R^2.
double bump2(double r);
/// int_{-1/2}^{s} phi1.
double bump1_cdf(double s);

/// eta(t) = (1_{(eps, T - eps)} * phi1_eps)(t), the smooth temporal cutoff.
/// eps = 0 returns 1.
double time_cutoff(double t, double T, double eps);

}  // namespace euler2d
