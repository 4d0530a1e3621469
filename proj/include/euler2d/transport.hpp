#pragma once

// Semi-Lagrangian transport of vorticity: RK2 midpoint backtracking of the
// characteristics, tensor cubic interpolation at the feet, the Duhamel
// forcing term, and the log-Lipschitz norm of a velocity field.
//
// Positions are handled in index coordinates xi = x / h1, eta = y / h2, so
// interior node (i, j) sits at (i + 1, j + 1) and the boundary at 0 and N.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "euler2d/grid.hpp"

namespace euler2d::transport {

/// How a stencil treats the two boundary lines of an axis.
enum class EndCondition {
  /// Values on the boundary are known to be zero and join the stencil.
  ZeroEnds,
  /// Only interior nodes are used; near the boundary the cubic extrapolates.
  OneSided,
};

/// Four-point cubic Lagrange stencil along one axis.
struct Stencil {
  std::ptrdiff_t start = 0;  // first node, index coordinate
  double w[4] = {0, 0, 0, 0};
};

/// Stencil for coordinate xi in [0, n + 1] on n interior nodes. Requires n >= 4.
Stencil make_stencil(double xi, std::size_t n, EndCondition end);

/// Evaluates a field at index coordinates with the given stencils. Nodes on
/// the boundary lines read as zero.
double evaluate(const ScalarField& f, const Stencil& s1, const Stencil& s2);

/// Scalar field value at the physical point (x, y) of the closed rectangle.
double interpolate(const ScalarField& f, double x, double y, EndCondition e1 = EndCondition::OneSided,
                   EndCondition e2 = EndCondition::OneSided);

/// Velocity at a point of the closed rectangle. The normal component of each
/// edge uses the known zero boundary value; the tangential one is one-sided.
std::pair<double, double> interpolate_velocity(const VectorField& u, double x, double y);

struct FlowSample {
  Grid grid;
  double dt = 0.0;
  /// Departure feet X(x) in index coordinates, per node.
  std::vector<double> xi;
  std::vector<double> eta;
  std::size_t clamp_count = 0;
  double clamp_distance = 0.0;  // summed physical distance moved by clamping
  bool cfl_exceeded = false;     // dt max|u| > min(h1, h2)
  /// Nodes whose interpolated vorticity was clipped to its cell range (set by advect).
  std::size_t limited_count = 0;

  std::pair<double, double> departure(std::size_t i, std::size_t j) const;
};

/// X = x - dt u(x - dt/2 u(x)), clamped to the closed rectangle.
FlowSample backtrack(const VectorField& u, double dt);

/// omega_new(x) = omega(X) + dt g(X_half) with X_half = (x + X) / 2. The
/// cubic value omega(X) is clipped to the range of the lattice cell holding X. When
/// flow is non-null it receives the departure points.
ScalarField advect(const ScalarField& omega, const VectorField& u, const ScalarField& g, double dt,
                   FlowSample* flow = nullptr);

/// psi_LL(s) = s log(e + 1/s).
double psi_ll(double s);

struct LogLipschitzReport {
  double ll_norm = 0.0;
  double sup_norm = 0.0;
  /// Largest plain Lipschitz quotient among the same pairs.
  double lipschitz_quotient = 0.0;
  /// Flattened node indices of the maximizing pair.
  std::size_t argmax_a = 0;
  std::size_t argmax_b = 0;
  std::size_t pairs = 0;
};

/// ||u||_inf + max over pairs of |u(x) - u(y)| / psi_LL(|x - y|), for
/// 0 < |x - y| <= min(1, diam / 2). All pairs on grids up to 64 x 64;
/// otherwise every pair within 3 nodes plus sample_pairs random pairs per
/// distance decade.
LogLipschitzReport log_lipschitz_norm(const VectorField& u, std::size_t sample_pairs = 20000,
                                      std::uint64_t seed = 1);

}  // namespace euler2d::transport
