#pragma once

// Initial vorticity and forcing presets.

#include <cstdint>
#include <string>

#include "euler2d/grid.hpp"

namespace euler2d::solver {

/// Initial vorticity. Presets:
///   taylor-green  A (a_j^2 + b_k^2) sin(j pi x / L1) sin(k pi y / L2), stream A sin sin
///   random        band-limited, modes j, k <= modes, coefficients ~ N(0,1) / (j^2 + k^2), sup = A
///   patch         A times the indicator of a disk of radius min(L1, L2) / 5 at (0.4 L1, 0.5 L2)
///   log-corner    A log(|x| / diam), unbounded at the corner (0, 0)
///   snapshot      scalar snapshot read from path
struct InitialSpec {
  std::string preset = "taylor-green";
  double amplitude = 1.0;
  std::size_t modes = 8;
  std::size_t j = 1;
  std::size_t k = 1;
  std::string path;
};

bool is_initial_preset(const std::string& name);
ScalarField make_initial(const InitialSpec& spec, const Grid& grid, std::uint64_t seed);

/// Band-limited random field with sup norm amplitude.
ScalarField band_limited(const Grid& grid, std::size_t modes, std::uint64_t seed, double amplitude = 1.0);

/// Forcing f(t, x) = A eta(t) F(x) with eta the temporal cutoff of width
/// ramp (eta = 1 when ramp = 0). Profiles F with s(x) = sin(pi x / L1),
/// c(x) = cos(pi x / L1) and likewise in y:
///   zero      0
///   shear     (sin(pi y / L2), 0)
///   vortex    grad-perp(s(x) s(y)) = (d2, -d1) of the product
///   gradient  grad(c(x) c(y))
struct ForcingSpec {
  std::string preset = "zero";
  double amplitude = 1.0;
  double ramp = 0.0;
};

bool is_forcing_preset(const std::string& name);

class Forcing {
 public:
  Forcing(const ForcingSpec& spec, const Grid& grid, double horizon);

  bool is_zero() const { return zero_; }
  /// A eta(t).
  double envelope(double t) const;
  VectorField field(double t) const;
  /// Vorticity source g = curl f(t), by fourth-order differences.
  ScalarField source(double t) const;

 private:
  ForcingSpec spec_;
  double horizon_;
  bool zero_;
  VectorField profile_;
  ScalarField source_profile_;
};

}  // namespace euler2d::solver
