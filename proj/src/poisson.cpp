#include "euler2d/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "euler2d/error.hpp"

namespace euler2d::poisson {

using spectral::mode_count;
using spectral::node_count;

SpectralOps::SpectralOps(const Grid& grid)
    : grid_(grid), ax1_(grid.n1(), grid.rect().L1), ax2_(grid.n2(), grid.rect().L2) {}

double SpectralOps::eigenvalue(std::size_t j, std::size_t k) const {
  const double a = ax1_.wavenumber(j + 1);
  const double b = ax2_.wavenumber(k + 1);
  return a * a + b * b;
}

std::vector<double> SpectralOps::synthesize(std::span<const double> coeffs, Basis b1, Nodes nodes1,
                                            Basis b2, Nodes nodes2) const {
  const std::size_t m1 = mode_count(b1, grid_.n1());
  const std::size_t m2 = mode_count(b2, grid_.n2());
  require(coeffs.size() == m1 * m2, "coefficient array shape mismatch");
  auto stage = ax1_.synthesis(b1, nodes1).apply_axis0(coeffs, m1, m2);
  return ax2_.synthesis(b2, nodes2).apply_axis1(stage, node_count(nodes1, grid_.n1()), m2);
}

std::vector<double> SpectralOps::project(std::span<const double> values, Basis b1, Nodes nodes1,
                                         Basis b2, Nodes nodes2) const {
  const std::size_t p1 = node_count(nodes1, grid_.n1());
  const std::size_t p2 = node_count(nodes2, grid_.n2());
  require(values.size() == p1 * p2, "lattice array shape mismatch");
  auto stage = ax1_.projection(b1, nodes1).apply_axis0(values, p1, p2);
  return ax2_.projection(b2, nodes2).apply_axis1(stage, mode_count(b1, grid_.n1()), p2);
}

SpectralCoeffs SpectralOps::analyze(const ScalarField& f) const {
  require(f.grid() == grid_, "field grid does not match the transform grid");
  return {grid_, project(f.values(), Basis::Sine, Nodes::Interior, Basis::Sine, Nodes::Interior)};
}

ScalarField SpectralOps::synthesize(const SpectralCoeffs& c) const {
  return {grid_, synthesize(c.c, Basis::Sine, Nodes::Interior, Basis::Sine, Nodes::Interior)};
}

SpectralCoeffs SpectralOps::solve_coeffs(const ScalarField& f) const {
  auto c = analyze(f);
  for (std::size_t j = 0; j < grid_.n1(); ++j)
    for (std::size_t k = 0; k < grid_.n2(); ++k) c(j, k) /= eigenvalue(j, k);
  return c;
}

ScalarField SpectralOps::dirichlet_solve(const ScalarField& f) const {
  return synthesize(solve_coeffs(f));
}

VectorField SpectralOps::velocity_from_stream(std::shared_ptr<const SpectralCoeffs> psi_hat) const {
  const std::size_t n1 = grid_.n1();
  const std::size_t n2 = grid_.n2();
  // u1 = d2 psi: sine in x, cosine in y.  u2 = -d1 psi: cosine in x, sine in y.
  std::vector<double> a(n1 * (n2 + 1), 0.0);
  std::vector<double> b((n1 + 1) * n2, 0.0);
  for (std::size_t j = 0; j < n1; ++j)
    for (std::size_t k = 0; k < n2; ++k) {
      const double c = (*psi_hat)(j, k);
      a[j * (n2 + 1) + (k + 1)] = ax2_.wavenumber(k + 1) * c;
      b[(j + 1) * n2 + k] = -ax1_.wavenumber(j + 1) * c;
    }
  VectorField u(ScalarField(grid_, synthesize(a, Basis::Sine, Nodes::Interior, Basis::Cosine,
                                              Nodes::Interior)),
                ScalarField(grid_, synthesize(b, Basis::Cosine, Nodes::Interior, Basis::Sine,
                                              Nodes::Interior)));
  u.stream = std::move(psi_hat);
  return u;
}

VectorField SpectralOps::biot_savart(const ScalarField& omega) const {
  return velocity_from_stream(std::make_shared<const SpectralCoeffs>(solve_coeffs(omega)));
}

ScalarField SpectralOps::curl_spectral(const VectorField& u) const {
  require(u.stream != nullptr, "spectral curl needs a field produced by biot_savart");
  require(u.grid() == grid_, "field grid does not match the transform grid");
  const auto& psi = *u.stream;
  SpectralCoeffs out{grid_, std::vector<double>(grid_.size())};
  for (std::size_t j = 0; j < grid_.n1(); ++j)
    for (std::size_t k = 0; k < grid_.n2(); ++k) {
      const double alpha = ax1_.wavenumber(j + 1);
      const double beta = ax2_.wavenumber(k + 1);
      const double u1_coeff = beta * psi(j, k);    // sin(ax) cos(by)
      const double u2_coeff = -alpha * psi(j, k);  // cos(ax) sin(by)
      // d1 cos(ax) = -a sin(ax), d2 cos(by) = -b sin(by).
      const double d1u2 = -alpha * u2_coeff;
      const double d2u1 = -beta * u1_coeff;
      out(j, k) = d1u2 - d2u1;
    }
  return synthesize(out);
}

ScalarField SpectralOps::divergence(const VectorField& u) const {
  require(u.grid() == grid_, "field grid does not match the transform grid");
  const std::size_t n1 = grid_.n1();
  const std::size_t n2 = grid_.n2();

  auto a = ax1_.projection(Basis::Sine, Nodes::Interior).apply_axis0(u.u1.values(), n1, n2);
  std::vector<double> da((n1 + 1) * n2, 0.0);
  for (std::size_t j = 0; j < n1; ++j)
    for (std::size_t m = 0; m < n2; ++m) da[(j + 1) * n2 + m] = ax1_.wavenumber(j + 1) * a[j * n2 + m];
  auto d1u1 = ax1_.synthesis(Basis::Cosine, Nodes::Interior).apply_axis0(da, n1 + 1, n2);

  auto b = ax2_.projection(Basis::Sine, Nodes::Interior).apply_axis1(u.u2.values(), n1, n2);
  std::vector<double> db(n1 * (n2 + 1), 0.0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t k = 0; k < n2; ++k) db[i * (n2 + 1) + k + 1] = ax2_.wavenumber(k + 1) * b[i * n2 + k];
  auto d2u2 = ax2_.synthesis(Basis::Cosine, Nodes::Interior).apply_axis1(db, n1, n2 + 1);

  for (std::size_t q = 0; q < d1u1.size(); ++q) d1u1[q] += d2u2[q];
  return {grid_, std::move(d1u1)};
}

Hessian SpectralOps::hessian(const SpectralCoeffs& psi_hat) const {
  const std::size_t n1 = grid_.n1();
  const std::size_t n2 = grid_.n2();
  SpectralCoeffs xx{grid_, std::vector<double>(grid_.size())};
  SpectralCoeffs yy{grid_, std::vector<double>(grid_.size())};
  std::vector<double> xy((n1 + 1) * (n2 + 1), 0.0);
  for (std::size_t j = 0; j < n1; ++j)
    for (std::size_t k = 0; k < n2; ++k) {
      const double alpha = ax1_.wavenumber(j + 1);
      const double beta = ax2_.wavenumber(k + 1);
      xx(j, k) = -alpha * alpha * psi_hat(j, k);
      yy(j, k) = -beta * beta * psi_hat(j, k);
      xy[(j + 1) * (n2 + 1) + (k + 1)] = alpha * beta * psi_hat(j, k);
    }
  return {synthesize(xx),
          ScalarField(grid_, synthesize(xy, Basis::Cosine, Nodes::Interior, Basis::Cosine,
                                        Nodes::Interior)),
          synthesize(yy)};
}

double SpectralOps::energy(const SpectralCoeffs& psi_hat) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < grid_.n1(); ++j)
    for (std::size_t k = 0; k < grid_.n2(); ++k) {
      const double c = psi_hat(j, k);
      sum += eigenvalue(j, k) * c * c;
    }
  return sum * 0.25 * grid_.rect().L1 * grid_.rect().L2;
}

ScalarField dirichlet_solve(const ScalarField& f) {
  require(f.all_finite(), "dirichlet_solve: right-hand side has non-finite values");
  return SpectralOps(f.grid()).dirichlet_solve(f);
}

VectorField biot_savart(const ScalarField& omega) {
  require(omega.all_finite(), "biot_savart: vorticity has non-finite values");
  return SpectralOps(omega.grid()).biot_savart(omega);
}

ScalarField curl(const VectorField& u) {
  if (u.stream) return SpectralOps(u.grid()).curl_spectral(u);
  return curl_fd(u);
}

ScalarField spectral_divergence(const VectorField& u) { return SpectralOps(u.grid()).divergence(u); }

namespace {

// Fourth-order first derivative of a line with unit spacing.
void differentiate_line(const double* f, std::size_t stride, std::size_t n, double h, double* out,
                        std::size_t out_stride) {
  auto at = [&](std::size_t m) { return f[m * stride]; };
  const double s = 1.0 / (12.0 * h);
  for (std::size_t m = 0; m < n; ++m) {
    double d;
    if (m >= 2 && m + 2 < n) {
      d = (at(m - 2) - 8.0 * at(m - 1) + 8.0 * at(m + 1) - at(m + 2)) * s;
    } else if (m == 0) {
      d = (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) * s;
    } else if (m == 1) {
      d = (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) * s;
    } else if (m == n - 1) {
      d = (25.0 * at(n - 1) - 48.0 * at(n - 2) + 36.0 * at(n - 3) - 16.0 * at(n - 4) +
           3.0 * at(n - 5)) * s;
    } else {
      d = (3.0 * at(n - 1) + 10.0 * at(n - 2) - 18.0 * at(n - 3) + 6.0 * at(n - 4) -
           at(n - 5)) * s;
    }
    out[m * out_stride] = d;
  }
}

}  // namespace

ScalarField derivative_fd(const ScalarField& f, int axis) {
  const Grid& g = f.grid();
  require(g.n1() >= 5 && g.n2() >= 5, "finite differences need at least 5 nodes per axis");
  ScalarField out(g);
  const double* src = f.values().data();
  double* dst = out.values().data();
  if (axis == 0) {
    for (std::size_t j = 0; j < g.n2(); ++j)
      differentiate_line(src + j, g.n2(), g.n1(), g.h1(), dst + j, g.n2());
  } else {
    for (std::size_t i = 0; i < g.n1(); ++i)
      differentiate_line(src + i * g.n2(), 1, g.n2(), g.h2(), dst + i * g.n2(), 1);
  }
  return out;
}

ScalarField curl_fd(const VectorField& u) {
  return derivative_fd(u.u2, 0) - derivative_fd(u.u1, 1);
}

double hessian_lp_norm(const Hessian& d2, double p) {
  return std::max({lp_norm(d2.xx, p), lp_norm(d2.xy, p), lp_norm(d2.yy, p)});
}

double hessian_linf_norm(const Hessian& d2) {
  return std::max({linf_norm(d2.xx), linf_norm(d2.xy), linf_norm(d2.yy)});
}

double w2p_constant_estimate(double p, std::span<const ScalarField> family) {
  if (!(p > 1.0)) throw PreconditionError("w2p_constant_estimate needs p > 1, got " + std::to_string(p));
  double best = 0.0;
  for (const auto& f : family) {
    const double fp = lp_norm(f, p);
    if (fp == 0.0) continue;
    SpectralOps ops(f.grid());
    const auto d2 = ops.hessian(ops.solve_coeffs(f));
    best = std::max(best, hessian_lp_norm(d2, p) / fp);
  }
  return best;
}

}  // namespace euler2d::poisson
