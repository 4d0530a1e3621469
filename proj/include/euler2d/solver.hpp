#pragma once

// Semi-Lagrangian vorticity-stream solver, pressure recovery, residuals and
// the twin-run stability experiment.

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "euler2d/grid.hpp"
#include "euler2d/poisson.hpp"
#include "euler2d/presets.hpp"

namespace euler2d::solver {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct SimConfig {
  Rectangle rect{};
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double dt = 0.0;
  double T = 0.0;
  InitialSpec initial{};
  ForcingSpec forcing{};
  std::vector<double> p_list{2.0, 4.0, 8.0, infinity};
  /// Record diagnostics every this many steps (and at the final step).
  std::size_t record_every = 10;
  /// Random pairs per distance decade for the log-Lipschitz norm.
  std::size_t ll_pairs = 2000;
  std::uint64_t seed = 1;

  Grid grid() const { return Grid(rect, n1, n2); }
  std::size_t steps() const;
  /// Empty when valid.
  std::vector<std::string> problems() const;
  void validate() const;
};

/// Exponents attached to an integrability index p >= 4/3.
struct ExponentTable {
  double p;
  double p_conj;
  double p_star;
  double s;
  double z;
};

/// s(2) is fixed at 1.9.
ExponentTable exponent_table(double p);

struct SimState {
  double t = 0.0;
  ScalarField omega;
  std::shared_ptr<const SpectralCoeffs> psi_hat;
  VectorField u;
  ScalarField psi;
};

SimState make_state(const poisson::SpectralOps& ops, ScalarField omega, double t = 0.0);

struct StepInfo {
  ScalarField source;
  std::size_t clamp_count = 0;
  double clamp_distance = 0.0;
  bool cfl_exceeded = false;
};

/// g = curl f(t + dt/2); omega' = omega(X) + dt g; u, psi rebuilt.
SimState step(const SimState& state, const Forcing& forcing, double dt,
              const poisson::SpectralOps& ops, StepInfo* info = nullptr);

/// |(E_next - E_prev)/dt - 2 (f, u_mid)|, with the work evaluated as
/// (curl f, psi_mid), which equals (f, u_mid) since psi vanishes on the boundary.
double energy_residual(const SimState& prev, const SimState& next, const ScalarField& source,
                       double dt, const poisson::SpectralOps& ops);

struct Pressure {
  ScalarField values;  // interior nodes, mean zero over the rectangle
  /// Cosine coefficients, (n1 + 1) x (n2 + 1), entry (0, 0) zero.
  std::vector<double> coeffs;
};

/// Neumann problem for grad pi = P(f - (u.grad)u), solved by Galerkin
/// projection onto gradients of cosine modes with trapezoid inner products
/// on the staggered node lattices.
Pressure recover_pressure(const SimState& state, const VectorField& forcing,
                          const poisson::SpectralOps& ops);

/// (u.grad)u at interior nodes by term-by-term differentiation.
VectorField advective_term(const SimState& state, const poisson::SpectralOps& ops);
VectorField pressure_gradient(const Pressure& pressure, const poisson::SpectralOps& ops);

/// ||du/dt + (u.grad)u + grad pi - f||_2 / (||f||_2 + ||u||_2^2 / |Omega|).
double strong_residual(const SimState& state, const VectorField& forcing, const Pressure& pressure,
                       const VectorField& dudt, const poisson::SpectralOps& ops);

/// Largest |u.n| over the boundary nodes, evaluated from the stream expansion.
double boundary_normal_velocity(const SimState& state, const poisson::SpectralOps& ops);

struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;
  std::vector<double> lp_vorticity;  // aligned with SimConfig::p_list
  double ll_norm = 0.0;
  double energy_residual = 0.0;
  double strong_residual = 0.0;
  std::size_t clamp_count = 0;  // since the previous record
  double forcing_l2 = 0.0;      // ||f||_2 at the midpoint of the last step
  std::vector<double> apriori_bound;  // e^t R_p per p
};

struct RunOptions {
  bool strong_residual = true;
  bool log_lipschitz = true;
  /// Check the spectral divergence every step (otherwise at records only).
  bool divergence_every_step = true;
  /// Called with (state, step index) every snapshot_every steps, including step 0.
  std::size_t snapshot_every = 0;
  std::function<void(const SimState&, std::size_t)> on_snapshot;
  /// Called at each record with the state; used by the stability experiment.
  std::function<void(const SimState&)> on_record;
};

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  SimState final_state;
  std::size_t steps = 0;
  bool apriori_ok = true;
  double max_divergence_ratio = 0.0;
  double max_normal_velocity = 0.0;
  std::size_t max_clamps_per_step = 0;
  bool clamp_ok = true;
  bool aborted = false;
  std::string message;

  bool passed() const { return apriori_ok && clamp_ok && !aborted && max_divergence_ratio <= 1e-10; }
};

RunResult run(const SimConfig& config, const RunOptions& options = {});
RunResult run_from(const SimConfig& config, ScalarField omega0, const RunOptions& options = {});

/// Runs to T, reverses the velocity (omega -> -omega), runs to T again and
/// reverses back. Returns ||omega_back - omega_0||_2 / ||omega_0||_2. Needs f = 0.
double reversibility_error(const SimConfig& config);

struct StabilityResult {
  std::vector<double> deltas;
  std::vector<double> times;
  std::vector<std::vector<double>> Y;  // Y[d][record]
  double K = 0.0;
  double M = 0.0;
  double ll_sup = 0.0;
  std::vector<bool> bound_ok;
  std::vector<bool> differential_ok;
  bool monotone_ok = true;
  /// Relative change of Y(T) under dt / 2, per delta; empty when not run.
  std::vector<double> dt_change;
  bool dt_ok = true;
  bool zero_ok = true;
  double zero_max = 0.0;

  bool passed() const;
  std::string report() const;
};

struct StabilityOptions {
  double calibration = 10.0;
  bool dt_halving = true;
  bool zero_twin = true;
  std::size_t perturbation_modes = 4;
};

/// Twin runs from omega_0 and omega_0 + delta zeta with zeta band-limited of
/// unit sup norm. deltas must be positive and decreasing.
StabilityResult yudovich_stability(const SimConfig& config, const std::vector<double>& deltas,
                                   const StabilityOptions& options = {});

}  // namespace euler2d::solver
