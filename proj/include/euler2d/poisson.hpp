#pragma once

// Dirichlet Green operator on the rectangle by sine transform, the
// Biot-Savart map u = grad-perp(G omega) = (d2 psi, -d1 psi), and spectral or
// finite-difference differentiation.

#include <memory>
#include <span>
#include <vector>

#include "euler2d/grid.hpp"
#include "euler2d/trig_transform.hpp"

namespace euler2d::poisson {

using spectral::Basis;
using spectral::Nodes;

/// Second derivatives of a stream function at interior nodes.
struct Hessian {
  ScalarField xx;
  ScalarField xy;
  ScalarField yy;
};

/// Transform tables bound to one grid. Construction costs O(n^2); reuse one
/// instance for repeated solves on the same grid.
class SpectralOps {
 public:
  explicit SpectralOps(const Grid& grid);

  const Grid& grid() const { return grid_; }
  const spectral::AxisTables& axis1() const { return ax1_; }
  const spectral::AxisTables& axis2() const { return ax2_; }

  /// lambda_jk = (j pi / L1)^2 + (k pi / L2)^2 for 0-based (j, k) -> modes (j+1, k+1).
  double eigenvalue(std::size_t j, std::size_t k) const;

  SpectralCoeffs analyze(const ScalarField& f) const;
  ScalarField synthesize(const SpectralCoeffs& c) const;

  /// Coefficients of G f, i.e. f_hat / lambda.
  SpectralCoeffs solve_coeffs(const ScalarField& f) const;
  ScalarField dirichlet_solve(const ScalarField& f) const;

  VectorField biot_savart(const ScalarField& omega) const;
  VectorField velocity_from_stream(std::shared_ptr<const SpectralCoeffs> psi_hat) const;

  /// curl by term-by-term differentiation of the velocity expansions; needs
  /// a field produced by biot_savart.
  ScalarField curl_spectral(const VectorField& u) const;
  /// d1 u1 + d2 u2 from samples: sine analysis of u1 in x and of u2 in y.
  ScalarField divergence(const VectorField& u) const;

  Hessian hessian(const SpectralCoeffs& psi_hat) const;

  /// Kinetic energy ||grad psi||^2 from the stream coefficients (Parseval).
  double energy(const SpectralCoeffs& psi_hat) const;

  /// Evaluates sum c_jk b1_j(x) b2_k(y) on the chosen node sets. The
  /// coefficient array is mode_count(b1, n1) x mode_count(b2, n2).
  std::vector<double> synthesize(std::span<const double> coeffs, Basis b1, Nodes nodes1,
                                 Basis b2, Nodes nodes2) const;
  /// Discrete L2 projection of lattice values onto b1 x b2.
  std::vector<double> project(std::span<const double> values, Basis b1, Nodes nodes1, Basis b2,
                              Nodes nodes2) const;

 private:
  Grid grid_;
  spectral::AxisTables ax1_;
  spectral::AxisTables ax2_;
};

ScalarField dirichlet_solve(const ScalarField& f);
VectorField biot_savart(const ScalarField& omega);

/// Spectral curl when the field carries stream coefficients, otherwise
/// fourth-order finite differences.
ScalarField curl(const VectorField& u);
/// Fourth-order centered differences, one-sided fourth order near the edges.
ScalarField curl_fd(const VectorField& u);
ScalarField spectral_divergence(const VectorField& u);

/// Fourth-order derivative along x (axis 0) or y (axis 1) of sampled data.
ScalarField derivative_fd(const ScalarField& f, int axis);

/// max over the Hessian entries of their Lp norms.
double hessian_lp_norm(const Hessian& d2, double p);
double hessian_linf_norm(const Hessian& d2);

/// max over the family of ||D^2 G f||_p / ||f||_p; zero members are skipped.
/// A lower bound for the operator norm, not the norm itself.
double w2p_constant_estimate(double p, std::span<const ScalarField> family);

}  // namespace euler2d::poisson
