#include "euler2d/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "euler2d/error.hpp"

namespace euler2d::transport {

Stencil make_stencil(double xi, std::size_t n, EndCondition end) {
  require(n >= 4, "cubic interpolation needs at least 4 interior nodes per axis");
  const auto N = static_cast<std::ptrdiff_t>(n + 1);
  const std::ptrdiff_t lo = end == EndCondition::ZeroEnds ? 0 : 1;
  const std::ptrdiff_t hi = end == EndCondition::ZeroEnds ? N : N - 1;
  std::ptrdiff_t s = static_cast<std::ptrdiff_t>(std::floor(xi)) - 1;
  s = std::clamp(s, lo, hi - 3);
  Stencil st;
  st.start = s;
  const double t = xi - static_cast<double>(s);
  st.w[0] = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  st.w[1] = t * (t - 2.0) * (t - 3.0) / 2.0;
  st.w[2] = -t * (t - 1.0) * (t - 3.0) / 2.0;
  st.w[3] = t * (t - 1.0) * (t - 2.0) / 6.0;
  return st;
}

double evaluate(const ScalarField& f, const Stencil& s1, const Stencil& s2) {
  const Grid& g = f.grid();
  const auto n1 = static_cast<std::ptrdiff_t>(g.n1());
  const auto n2 = static_cast<std::ptrdiff_t>(g.n2());
  const double* v = f.values().data();
  double sum = 0.0;
  for (int a = 0; a < 4; ++a) {
    const std::ptrdiff_t m1 = s1.start + a;  // index coordinate, node i = m1 - 1
    if (m1 <= 0 || m1 > n1) continue;
    const double* row = v + (m1 - 1) * n2;
    double line = 0.0;
    for (int b = 0; b < 4; ++b) {
      const std::ptrdiff_t m2 = s2.start + b;
      if (m2 <= 0 || m2 > n2) continue;
      line += s2.w[b] * row[m2 - 1];
    }
    sum += s1.w[a] * line;
  }
  return sum;
}

namespace {

void require_inside(const Grid& g, double x, double y) {
  if (!(x >= 0.0 && x <= g.rect().L1 && y >= 0.0 && y <= g.rect().L2))
    throw PreconditionError("interpolation point lies outside the rectangle");
}

double clamp_index(double v, double top, std::size_t& count) {
  if (v < 0.0) {
    ++count;
    return 0.0;
  }
  if (v > top) {
    ++count;
    return top;
  }
  return v;
}

// Range of the interior nodes of the lattice cell holding (xi, eta).
std::pair<double, double> cell_range(const ScalarField& f, double xi, double eta) {
  const Grid& g = f.grid();
  const auto n1 = static_cast<std::ptrdiff_t>(g.n1());
  const auto n2 = static_cast<std::ptrdiff_t>(g.n2());
  const auto a = static_cast<std::ptrdiff_t>(std::floor(xi));
  const auto b = static_cast<std::ptrdiff_t>(std::floor(eta));
  const std::ptrdiff_t i0 = std::clamp<std::ptrdiff_t>(a, 1, n1), i1 = std::clamp<std::ptrdiff_t>(a + 1, 1, n1);
  const std::ptrdiff_t j0 = std::clamp<std::ptrdiff_t>(b, 1, n2), j1 = std::clamp<std::ptrdiff_t>(b + 1, 1, n2);
  double lo = f(i0 - 1, j0 - 1), hi = lo;
  for (auto i : {i0, i1})
    for (auto j : {j0, j1}) {
      const double v = f(i - 1, j - 1);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  return {lo, hi};
}

}  // namespace

double interpolate(const ScalarField& f, double x, double y, EndCondition e1, EndCondition e2) {
  const Grid& g = f.grid();
  require_inside(g, x, y);
  return evaluate(f, make_stencil(x / g.h1(), g.n1(), e1), make_stencil(y / g.h2(), g.n2(), e2));
}

std::pair<double, double> interpolate_velocity(const VectorField& u, double x, double y) {
  const Grid& g = u.grid();
  require_inside(g, x, y);
  const double xi = x / g.h1();
  const double eta = y / g.h2();
  const Stencil zx = make_stencil(xi, g.n1(), EndCondition::ZeroEnds);
  const Stencil ox = make_stencil(xi, g.n1(), EndCondition::OneSided);
  const Stencil zy = make_stencil(eta, g.n2(), EndCondition::ZeroEnds);
  const Stencil oy = make_stencil(eta, g.n2(), EndCondition::OneSided);
  return {evaluate(u.u1, zx, oy), evaluate(u.u2, ox, zy)};
}

std::pair<double, double> FlowSample::departure(std::size_t i, std::size_t j) const {
  const std::size_t q = grid.index(i, j);
  return {xi[q] * grid.h1(), eta[q] * grid.h2()};
}

FlowSample backtrack(const VectorField& u, double dt) {
  require(dt > 0.0, "time step must be positive");
  const Grid& g = u.grid();
  FlowSample flow;
  flow.grid = g;
  flow.dt = dt;
  flow.xi.resize(g.size());
  flow.eta.resize(g.size());
  flow.cfl_exceeded = dt * linf_norm(u) > std::min(g.h1(), g.h2());
  const double top1 = static_cast<double>(g.n1() + 1);
  const double top2 = static_cast<double>(g.n2() + 1);
  const double c1 = dt / g.h1();
  const double c2 = dt / g.h2();
  std::size_t ignored = 0;
  for (std::size_t i = 0; i < g.n1(); ++i)
    for (std::size_t j = 0; j < g.n2(); ++j) {
      const std::size_t q = g.index(i, j);
      const double m1 = static_cast<double>(i + 1);
      const double m2 = static_cast<double>(j + 1);
      const double xm = clamp_index(m1 - 0.5 * c1 * u.u1.values()[q], top1, ignored);
      const double ym = clamp_index(m2 - 0.5 * c2 * u.u2.values()[q], top2, ignored);
      const Stencil zx = make_stencil(xm, g.n1(), EndCondition::ZeroEnds);
      const Stencil ox = make_stencil(xm, g.n1(), EndCondition::OneSided);
      const Stencil zy = make_stencil(ym, g.n2(), EndCondition::ZeroEnds);
      const Stencil oy = make_stencil(ym, g.n2(), EndCondition::OneSided);
      const double raw1 = m1 - c1 * evaluate(u.u1, zx, oy);
      const double raw2 = m2 - c2 * evaluate(u.u2, ox, zy);
      const std::size_t before = flow.clamp_count;
      const double d1 = clamp_index(raw1, top1, flow.clamp_count);
      const double d2 = clamp_index(raw2, top2, flow.clamp_count);
      if (flow.clamp_count != before) {
        flow.clamp_count = before + 1;  // one event per node
        flow.clamp_distance += std::hypot((raw1 - d1) * g.h1(), (raw2 - d2) * g.h2());
      }
      flow.xi[q] = d1;
      flow.eta[q] = d2;
    }
  return flow;
}

ScalarField advect(const ScalarField& omega, const VectorField& u, const ScalarField& g, double dt,
                   FlowSample* flow_out) {
  require(omega.grid() == u.grid() && omega.grid() == g.grid(), "advection fields must share a grid");
  const Grid& grid = omega.grid();
  FlowSample flow = backtrack(u, dt);
  ScalarField out(grid);
  for (std::size_t i = 0; i < grid.n1(); ++i)
    for (std::size_t j = 0; j < grid.n2(); ++j) {
      const std::size_t q = grid.index(i, j);
      const double xi = flow.xi[q];
      const double eta = flow.eta[q];
      const Stencil s1 = make_stencil(xi, grid.n1(), EndCondition::OneSided);
      const Stencil s2 = make_stencil(eta, grid.n2(), EndCondition::OneSided);
      const double hx = 0.5 * (static_cast<double>(i + 1) + xi);
      const double hy = 0.5 * (static_cast<double>(j + 1) + eta);
      const Stencil t1 = make_stencil(hx, grid.n1(), EndCondition::OneSided);
      const Stencil t2 = make_stencil(hy, grid.n2(), EndCondition::OneSided);
      // clip to the cell so the interpolant creates no new extrema
      const auto [lo, hi] = cell_range(omega, xi, eta);
      const double raw = evaluate(omega, s1, s2);
      const double w = std::clamp(raw, lo, hi);
      if (w != raw) ++flow.limited_count;
      out.values()[q] = w + dt * evaluate(g, t1, t2);
    }
  if (flow_out) *flow_out = std::move(flow);
  return out;
}

double psi_ll(double s) { return s * std::log(std::numbers::e + 1.0 / s); }

LogLipschitzReport log_lipschitz_norm(const VectorField& u, std::size_t sample_pairs, std::uint64_t seed) {
  require(sample_pairs >= 1, "log-Lipschitz norm needs at least one sample pair");
  const Grid& g = u.grid();
  const std::size_t n1 = g.n1(), n2 = g.n2();
  const double h1 = g.h1(), h2 = g.h2();
  const double smax = std::min(1.0, 0.5 * g.rect().diameter());
  const double* a1 = u.u1.values().data();
  const double* a2 = u.u2.values().data();

  LogLipschitzReport rep;
  rep.sup_norm = linf_norm(u);
  double best = 0.0;
  auto visit = [&](std::size_t i, std::size_t j, std::ptrdiff_t di, std::ptrdiff_t dj) {
    const auto i2 = static_cast<std::ptrdiff_t>(i) + di;
    const auto j2 = static_cast<std::ptrdiff_t>(j) + dj;
    if (i2 < 0 || j2 < 0 || i2 >= static_cast<std::ptrdiff_t>(n1) || j2 >= static_cast<std::ptrdiff_t>(n2)) return;
    const double s = std::hypot(static_cast<double>(di) * h1, static_cast<double>(dj) * h2);
    if (s == 0.0 || s > smax) return;
    const std::size_t p = i * n2 + j;
    const std::size_t q = static_cast<std::size_t>(i2) * n2 + static_cast<std::size_t>(j2);
    const double d = std::hypot(a1[p] - a1[q], a2[p] - a2[q]);
    ++rep.pairs;
    rep.lipschitz_quotient = std::max(rep.lipschitz_quotient, d / s);
    const double ratio = d / psi_ll(s);
    if (ratio > best) {
      best = ratio;
      rep.argmax_a = p;
      rep.argmax_b = q;
    }
  };

  if (n1 * n2 <= 64 * 64) {
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n2; ++j)
        for (std::ptrdiff_t di = 0; di < static_cast<std::ptrdiff_t>(n1 - i); ++di)
          for (std::ptrdiff_t dj = -static_cast<std::ptrdiff_t>(j); dj < static_cast<std::ptrdiff_t>(n2 - j); ++dj)
            if (di > 0 || dj > 0) visit(i, j, di, dj);
  } else {
    constexpr std::ptrdiff_t r = 3;
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n2; ++j)
        for (std::ptrdiff_t di = 0; di <= r; ++di)
          for (std::ptrdiff_t dj = -r; dj <= r; ++dj)
            if (di > 0 || dj > 0) visit(i, j, di, dj);
    // Random pairs, stratified by distance decade above the short range.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick_i(0, n1 - 1), pick_j(0, n2 - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double hmin = std::min(h1, h2);
    for (double lo = r * hmin; lo < smax; lo *= 10.0) {
      const double hi = std::min(smax, 10.0 * lo);
      for (std::size_t k = 0; k < sample_pairs; ++k) {
        const double s = lo * std::pow(hi / lo, unit(rng));
        const double t = 2.0 * std::numbers::pi * unit(rng);
        const auto di = static_cast<std::ptrdiff_t>(std::lround(s * std::cos(t) / h1));
        const auto dj = static_cast<std::ptrdiff_t>(std::lround(s * std::sin(t) / h2));
        visit(pick_i(rng), pick_j(rng), di, dj);
      }
    }
  }
  rep.ll_norm = rep.sup_norm + best;
  return rep;
}

}  // namespace euler2d::transport
