#include "euler2d/presets.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "euler2d/error.hpp"
#include "euler2d/io.hpp"
#include "euler2d/poisson.hpp"
#include "euler2d/quadrature.hpp"

namespace euler2d::solver {

namespace {
constexpr double pi = std::numbers::pi;
}

bool is_initial_preset(const std::string& name) {
  return name == "taylor-green" || name == "random" || name == "patch" || name == "log-corner" ||
         name == "snapshot";
}

bool is_forcing_preset(const std::string& name) {
  return name == "zero" || name == "shear" || name == "vortex" || name == "gradient";
}

ScalarField band_limited(const Grid& grid, std::size_t modes, std::uint64_t seed, double amplitude) {
  require(modes >= 1, "band-limited field needs at least one mode");
  const std::size_t m1 = std::min(modes, grid.n1());
  const std::size_t m2 = std::min(modes, grid.n2());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SpectralCoeffs c{grid, std::vector<double>(grid.size(), 0.0)};
  for (std::size_t j = 1; j <= m1; ++j)
    for (std::size_t k = 1; k <= m2; ++k)
      c(j - 1, k - 1) = normal(rng) / static_cast<double>(j * j + k * k);
  auto f = poisson::SpectralOps(grid).synthesize(c);
  const double top = linf_norm(f);
  if (top > 0.0) f *= amplitude / top;
  return f;
}

ScalarField make_initial(const InitialSpec& spec, const Grid& grid, std::uint64_t seed) {
  const Rectangle& r = grid.rect();
  const double A = spec.amplitude;
  if (spec.preset == "taylor-green") {
    require(spec.j >= 1 && spec.k >= 1, "taylor-green mode indices must be positive");
    const double a = static_cast<double>(spec.j) * pi / r.L1;
    const double b = static_cast<double>(spec.k) * pi / r.L2;
    return ScalarField::sample(grid, [&](double x, double y) {
      return A * (a * a + b * b) * std::sin(a * x) * std::sin(b * y);
    });
  }
  if (spec.preset == "random") return band_limited(grid, spec.modes, seed, A);
  if (spec.preset == "patch") {
    const double cx = 0.4 * r.L1, cy = 0.5 * r.L2, rad = 0.2 * std::min(r.L1, r.L2);
    return ScalarField::sample(grid, [&](double x, double y) {
      return std::hypot(x - cx, y - cy) < rad ? A : 0.0;
    });
  }
  if (spec.preset == "log-corner") {
    const double d = r.diameter();
    return ScalarField::sample(grid, [&](double x, double y) { return A * std::log(std::hypot(x, y) / d); });
  }
  if (spec.preset == "snapshot") {
    require(!spec.path.empty(), "snapshot preset needs initial.path");
    auto snap = io::read_snapshot(spec.path);
    if (snap.kind != io::FieldKind::Scalar) throw IoError(spec.path + ": expected a scalar snapshot");
    if (!(snap.field.grid() == grid))
      throw PreconditionError(spec.path + ": snapshot grid does not match the configured grid");
    return snap.field;
  }
  throw PreconditionError("unknown initial preset '" + spec.preset + "'");
}

Forcing::Forcing(const ForcingSpec& spec, const Grid& grid, double horizon)
    : spec_(spec), horizon_(horizon), zero_(spec.preset == "zero" || spec.amplitude == 0.0) {
  require(is_forcing_preset(spec.preset), "unknown forcing preset '" + spec.preset + "'");
  require(spec.ramp >= 0.0 && (spec.ramp == 0.0 || 2.0 * spec.ramp < horizon),
          "forcing.ramp must satisfy 0 <= ramp < T / 2");
  const double a = pi / grid.rect().L1;
  const double b = pi / grid.rect().L2;
  if (spec.preset == "shear") {
    profile_ = VectorField::sample(grid, [&](double, double y) { return std::pair{std::sin(b * y), 0.0}; });
  } else if (spec.preset == "vortex") {
    profile_ = VectorField::sample(grid, [&](double x, double y) {
      return std::pair{b * std::sin(a * x) * std::cos(b * y), -a * std::cos(a * x) * std::sin(b * y)};
    });
  } else if (spec.preset == "gradient") {
    profile_ = VectorField::sample(grid, [&](double x, double y) {
      return std::pair{-a * std::sin(a * x) * std::cos(b * y), -b * std::cos(a * x) * std::sin(b * y)};
    });
  } else {
    profile_ = VectorField(grid);
  }
  source_profile_ = zero_ ? ScalarField(grid) : poisson::curl_fd(profile_);
}

double Forcing::envelope(double t) const {
  if (zero_) return 0.0;
  return spec_.amplitude * time_cutoff(std::clamp(t, 0.0, horizon_), horizon_, spec_.ramp);
}

VectorField Forcing::field(double t) const {
  const double e = envelope(t);
  return VectorField(e * profile_.u1, e * profile_.u2);
}

ScalarField Forcing::source(double t) const { return envelope(t) * source_profile_; }

}  // namespace euler2d::solver
