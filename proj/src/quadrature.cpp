#include "euler2d/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <numbers>

#include "euler2d/error.hpp"

namespace euler2d {

namespace {

double raw_bump(double r) {
  const double q = 1.0 - 4.0 * r * r;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

// The profile is flat to all orders at r = 1/2, so a modest rule on a few
// panels is accurate to rounding.
double panel_integral(double a, double b, double (*f)(double)) {
  static const QuadratureRule rule = gauss_legendre(40, 0.0, 1.0);
  constexpr int panels = 8;
  const double w = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p)
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      sum += rule.weights[q] * w * f(a + w * (p + rule.nodes[q]));
  return sum;
}

double bump1_constant() {
  static const double c = 1.0 / (2.0 * panel_integral(0.0, 0.5, raw_bump));
  return c;
}

double bump2_constant() {
  static const double c =
      1.0 / (2.0 * std::numbers::pi * panel_integral(0.0, 0.5, [](double r) { return r * raw_bump(r); }));
  return c;
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  require(n >= 1 && b > a, "Gauss-Legendre rule needs n >= 1 and a < b");
  const auto zeros = boost::math::legendre_p_zeros<double>(static_cast<int>(n));
  QuadratureRule rule;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto add = [&](double x) {
    const double dp = boost::math::legendre_p_prime(static_cast<int>(n), x);
    rule.nodes.push_back(mid + half * x);
    rule.weights.push_back(half * 2.0 / ((1.0 - x * x) * dp * dp));
  };
  // legendre_p_zeros returns the nonnegative zeros in increasing order.
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it)
    if (*it != 0.0) add(-*it);
  for (double x : zeros) add(x);
  return rule;
}

double bump1(double t) { return bump1_constant() * raw_bump(t); }

double bump2(double r) { return bump2_constant() * raw_bump(r); }

double bump1_cdf(double s) {
  if (s <= -0.5) return 0.0;
  if (s >= 0.5) return 1.0;
  if (s <= 0.0) return bump1_constant() * panel_integral(-0.5, s, raw_bump);
  return 1.0 - bump1_constant() * panel_integral(s, 0.5, raw_bump);
}

double time_cutoff(double t, double T, double eps) {
  if (eps == 0.0) return 1.0;
  require(eps > 0.0 && 2.0 * eps < T, "time cutoff needs 0 < eps < T / 2");
  // eta(t) = Phi((t - eps) / eps) - Phi((t - T + eps) / eps).
  return bump1_cdf((t - eps) / eps) - bump1_cdf((t - T + eps) / eps);
}

}  // namespace euler2d
