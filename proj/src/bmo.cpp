#include "euler2d/bmo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "euler2d/error.hpp"
#include "euler2d/poisson.hpp"

namespace euler2d::bmo {

namespace {

// Start offsets of k-wide blocks on n nodes: stride max(1, k/2), plus an
// end-aligned block.
std::vector<std::size_t> block_starts(std::size_t n, std::size_t k) {
  std::vector<std::size_t> starts;
  const std::size_t stride = std::max<std::size_t>(1, k / 2);
  for (std::size_t s = 0; s + k <= n; s += stride) starts.push_back(s);
  if (starts.empty() || starts.back() + k != n) starts.push_back(n - k);
  return starts;
}

// Raw lattice with spacings; used for both the interior and padded families.
struct Lattice {
  std::size_t n1, n2;
  double h1, h2;
  const double* v;
  double at(std::size_t i, std::size_t j) const { return v[i * n2 + j]; }
};

struct Scan {
  double osc = 0.0;
  double large = 0.0;
};

// Runs the square family. If parts is non-null, per-node maxima are written.
Scan scan(const Lattice& lat, double threshold, SharpParts* parts) {
  Scan out;
  for (std::size_t k = 1; k <= lat.n1; k *= 2) {
    const std::size_t k2 = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(static_cast<double>(k) * lat.h1 / lat.h2)));
    if (k2 > lat.n2) break;
    const double area = static_cast<double>(k) * lat.h1 * static_cast<double>(k2) * lat.h2;
    const bool large = area >= threshold * (1.0 - 1e-12);
    const double count = static_cast<double>(k * k2);
    const auto s1 = block_starts(lat.n1, k);
    const auto s2 = block_starts(lat.n2, k2);
    for (std::size_t a : s1)
      for (std::size_t b : s2) {
        double sum = 0.0, abs_sum = 0.0;
        for (std::size_t i = a; i < a + k; ++i)
          for (std::size_t j = b; j < b + k2; ++j) {
            const double v = lat.at(i, j);
            sum += v;
            abs_sum += std::abs(v);
          }
        const double mean = sum / count;
        double dev = 0.0;
        for (std::size_t i = a; i < a + k; ++i)
          for (std::size_t j = b; j < b + k2; ++j) dev += std::abs(lat.at(i, j) - mean);
        const double osc = dev / count;
        const double big = large ? abs_sum / count : 0.0;
        out.osc = std::max(out.osc, osc);
        out.large = std::max(out.large, big);
        if (parts) {
          for (std::size_t i = a; i < a + k; ++i)
            for (std::size_t j = b; j < b + k2; ++j) {
              double& o = parts->oscillation(i, j);
              o = std::max(o, osc);
              double& l = parts->large_mean(i, j);
              l = std::max(l, big);
            }
        }
      }
  }
  return out;
}

Lattice interior_lattice(const ScalarField& f) {
  const Grid& g = f.grid();
  return {g.n1(), g.n2(), g.h1(), g.h2(), f.values().data()};
}

}  // namespace

double area_threshold(const Rectangle& rect) { return std::min(1.0, rect.area() / 4.0); }

SharpParts sharp_parts(const ScalarField& f) {
  require(f.all_finite(), "sharp function needs finite values");
  SharpParts parts{ScalarField(f.grid()), ScalarField(f.grid())};
  scan(interior_lattice(f), area_threshold(f.grid().rect()), &parts);
  return parts;
}

ScalarField sharp_function(const ScalarField& f) {
  auto parts = sharp_parts(f);
  ScalarField out(f.grid());
  for (std::size_t q = 0; q < out.values().size(); ++q)
    out.values()[q] = std::max(parts.oscillation.values()[q], parts.large_mean.values()[q]);
  return out;
}

double bmo_r(const ScalarField& f) {
  require(f.all_finite(), "bmo norm needs finite values");
  const Scan s = scan(interior_lattice(f), area_threshold(f.grid().rect()), nullptr);
  return std::max(s.osc, s.large);
}

double bmo_z(const ScalarField& f) {
  require(f.all_finite(), "bmo norm needs finite values");
  const Grid& g = f.grid();
  const std::size_t pad = g.n1() + 1;
  const std::size_t pad2 = g.n2() + 1;
  const std::size_t m1 = g.n1() + 2 * pad;
  const std::size_t m2 = g.n2() + 2 * pad2;
  std::vector<double> ext(m1 * m2, 0.0);
  for (std::size_t i = 0; i < g.n1(); ++i)
    for (std::size_t j = 0; j < g.n2(); ++j) ext[(i + pad) * m2 + j + pad2] = f(i, j);
  const double threshold = area_threshold(g.rect());
  const Scan padded = scan({m1, m2, g.h1(), g.h2(), ext.data()}, threshold, nullptr);
  const Scan inner = scan(interior_lattice(f), threshold, nullptr);
  return std::max({padded.osc, padded.large, inner.osc, inner.large});
}

bool BmoReport::chain_holds() const {
  const double tol = 1e-12 * std::max(1.0, linf);
  return bmo_r <= bmo_z + tol && (!std::isfinite(linf) || bmo_z <= linf + tol);
}

BmoReport bmo_norms(const ScalarField& f, bool zero_extend, std::span<const double> p_list) {
  BmoReport r;
  r.bmo_r = bmo_r(f);
  r.bmo_z = zero_extend ? bmo_z(f) : r.bmo_r;
  r.linf = linf_norm(f);
  if (!p_list.empty() && r.linf > 0.0) r.jn_ratios = jn_ratios(f, p_list);
  return r;
}

std::vector<std::pair<double, double>> jn_ratios(const ScalarField& f, std::span<const double> p_list) {
  const double b = bmo_r(f);
  const double top = linf_norm(f);
  if (b == 0.0 && top > 0.0) throw NumericalError("bmo_r vanished for a nonzero field");
  std::vector<std::pair<double, double>> out;
  for (double p : p_list) {
    require(p >= 2.0 && std::isfinite(p), "John-Nirenberg exponents must lie in [2, inf)");
    out.emplace_back(p, top == 0.0 ? 0.0 : lp_norm(f, p) / (p * b));
  }
  return out;
}

double calibrate_jn_constant(const Rectangle& rect, std::span<const double> p_list, std::size_t n) {
  const Grid g(rect, n, n);
  const double a = std::numbers::pi / rect.L1;
  const double b = std::numbers::pi / rect.L2;
  const ScalarField one(g, 1.0);
  const auto mode = ScalarField::sample(g, [&](double x, double y) { return std::sin(a * x) * std::sin(b * y); });
  double best = 0.0;
  for (const auto* f : {&one, &mode})
    for (const auto& [p, r] : jn_ratios(*f, p_list)) best = std::max(best, r);
  return 4.0 * best;
}

JnCheck jn_check(const ScalarField& f, std::span<const double> p_list, double constant) {
  JnCheck c;
  c.constant = constant;
  c.ratios = jn_ratios(f, p_list);
  for (const auto& [p, r] : c.ratios) c.violated = c.violated || r > constant;
  return c;
}

ScalarField odd_reflection(const ScalarField& f, Edge edge) {
  const Grid& g = f.grid();
  const bool along_x = edge == Edge::Left || edge == Edge::Right;
  const std::size_t n1 = along_x ? 2 * g.n1() + 1 : g.n1();
  const std::size_t n2 = along_x ? g.n2() : 2 * g.n2() + 1;
  const Rectangle rect(along_x ? 2 * g.rect().L1 : g.rect().L1, along_x ? g.rect().L2 : 2 * g.rect().L2);
  ScalarField out(Grid(rect, n1, n2));
  for (std::size_t i = 0; i < g.n1(); ++i)
    for (std::size_t j = 0; j < g.n2(); ++j) {
      const double v = f(i, j);
      switch (edge) {
        case Edge::Left:
          out(g.n1() + 1 + i, j) = v;
          out(g.n1() - 1 - i, j) = -v;
          break;
        case Edge::Right:
          out(i, j) = v;
          out(2 * g.n1() - i, j) = -v;
          break;
        case Edge::Bottom:
          out(i, g.n2() + 1 + j) = v;
          out(i, g.n2() - 1 - j) = -v;
          break;
        case Edge::Top:
          out(i, j) = v;
          out(i, 2 * g.n2() - j) = -v;
          break;
      }
    }
  return out;
}

double w2bmo_ratio(const ScalarField& f) {
  const double denom = bmo_z(f);
  if (linf_norm(f) == 0.0 || denom == 0.0) throw PreconditionError("w2bmo_ratio needs a nonzero field");
  poisson::SpectralOps ops(f.grid());
  const auto psi_hat = ops.solve_coeffs(f);
  const auto d2 = ops.hessian(psi_hat);
  const double second = std::max({bmo_r(d2.xx), bmo_r(d2.xy), bmo_r(d2.yy)});
  return (bmo_r(ops.synthesize(psi_hat)) + second) / denom;
}

double loglog_slope(std::span<const std::pair<double, double>> xy) {
  require(xy.size() >= 2, "slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : xy) {
    require(x > 0.0 && y > 0.0, "log-log fit needs positive data");
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(xy.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

GrowthStudy constant_growth_study(std::span<const double> p_list, std::span<const ScalarField> family) {
  GrowthStudy study;
  for (double p : p_list) require(p >= 2.0 && p <= 64.0, "growth study exponents must lie in [2, 64]");
  std::vector<const ScalarField*> members;
  for (const auto& f : family)
    if (linf_norm(f) > 0.0) members.push_back(&f);
  if (members.empty()) return study;

  // One Hessian per member, reused across exponents.
  std::vector<std::pair<poisson::Hessian, const ScalarField*>> hess;
  for (const auto* f : members) {
    poisson::SpectralOps ops(f->grid());
    hess.emplace_back(ops.hessian(ops.solve_coeffs(*f)), f);
  }
  for (double p : p_list) {
    double best = 0.0;
    for (const auto& [d2, f] : hess) best = std::max(best, poisson::hessian_lp_norm(d2, p) / lp_norm(*f, p));
    study.table.emplace_back(p, best);
  }
  if (study.table.size() >= 2) study.slope = loglog_slope(study.table);
  return study;
}

}  // namespace euler2d::bmo
