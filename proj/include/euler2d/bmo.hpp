#pragma once

// Discrete local bmo norms on the rectangle over grid-aligned dyadic squares,
// John-Nirenberg ratios, odd reflection and the W^{2,bmo} ratio study.
//
// A square of side k nodes (k = 2^m) covers k x k2 nodes with
// k2 = round(k h1 / h2); squares are placed at stride max(1, k / 2) plus one
// end-aligned square per axis so every node is covered at every scale that fits.

#include <span>
#include <utility>
#include <vector>

#include "euler2d/grid.hpp"

namespace euler2d::bmo {

/// min(1, |Omega| / 4): squares at least this large contribute mean |f|.
double area_threshold(const Rectangle& rect);

struct SharpParts {
  ScalarField oscillation;  // sup over squares containing the node of mean |f - f_Q|
  ScalarField large_mean;   // sup over large squares containing the node of mean |f|
};

SharpParts sharp_parts(const ScalarField& f);
/// f#(x) = max(oscillation, large_mean).
ScalarField sharp_function(const ScalarField& f);

/// sup of the sharp function over squares inside the rectangle.
double bmo_r(const ScalarField& f);
/// Same supremum for the zero extension: squares run over a lattice padded
/// by one rectangle on each side (boundary nodes zero), combined with the
/// interior family so that bmo_r <= bmo_z.
double bmo_z(const ScalarField& f);

struct BmoReport {
  double bmo_z = 0.0;
  double bmo_r = 0.0;
  double linf = 0.0;
  std::vector<std::pair<double, double>> jn_ratios;  // (p, ||f||_p / (p bmo_r))

  /// bmo_r <= bmo_z <= linf up to rounding.
  bool chain_holds() const;
};

/// With zero_extend false, bmo_z is reported equal to bmo_r.
BmoReport bmo_norms(const ScalarField& f, bool zero_extend = true, std::span<const double> p_list = {});

/// (p, ||f||_p / (p bmo_r)) for each p >= 2. Throws NumericalError if
/// bmo_r = 0 while f is nonzero.
std::vector<std::pair<double, double>> jn_ratios(const ScalarField& f, std::span<const double> p_list);

/// 4 times the largest ratio on the constant and Taylor-Green eigenmode
/// fields of the rectangle at the given resolution.
double calibrate_jn_constant(const Rectangle& rect, std::span<const double> p_list, std::size_t n = 128);

struct JnCheck {
  std::vector<std::pair<double, double>> ratios;
  double constant = 0.0;
  bool violated = false;
};
JnCheck jn_check(const ScalarField& f, std::span<const double> p_list, double constant);

enum class Edge { Left, Right, Bottom, Top };

/// Odd reflection across one edge onto the doubled rectangle. The grid
/// doubles to 2n + 1 nodes along the reflected axis; the node on the
/// reflection line is zero.
ScalarField odd_reflection(const ScalarField& f, Edge edge);

/// (bmo_r(G f) + max-entry bmo_r(D^2 G f)) / bmo_z(f). Throws for f = 0.
double w2bmo_ratio(const ScalarField& f);

struct GrowthStudy {
  std::vector<std::pair<double, double>> table;  // (p, max over family of ||D^2 G f||_p / ||f||_p)
  double slope = 0.0;                            // least-squares slope of log ratio on log p
};

/// Empty table when every member is zero.
GrowthStudy constant_growth_study(std::span<const double> p_list, std::span<const ScalarField> family);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const std::pair<double, double>> xy);

}  // namespace euler2d::bmo
