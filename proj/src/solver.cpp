#include "euler2d/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "euler2d/error.hpp"
#include "euler2d/transport.hpp"

namespace euler2d::solver {

using poisson::SpectralOps;
using spectral::Basis;
using spectral::Nodes;

std::size_t SimConfig::steps() const {
  if (!(dt > 0.0) || !(T > 0.0)) return 0;
  return static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
}

std::vector<std::string> SimConfig::problems() const {
  std::vector<std::string> out;
  if (!(rect.L1 > 0.0 && std::isfinite(rect.L1))) out.push_back("domain.L1 must be positive");
  if (!(rect.L2 > 0.0 && std::isfinite(rect.L2))) out.push_back("domain.L2 must be positive");
  if (n1 < 8) out.push_back("grid.n1 must be at least 8");
  if (n2 < 8) out.push_back("grid.n2 must be at least 8");
  if (!(dt > 0.0 && std::isfinite(dt))) out.push_back("time.dt must be positive");
  if (!(T >= dt && std::isfinite(T))) out.push_back("time.T must be finite and at least time.dt");
  if (!is_initial_preset(initial.preset)) out.push_back("initial.preset '" + initial.preset + "' is unknown");
  if (!std::isfinite(initial.amplitude)) out.push_back("initial.amplitude must be finite");
  if (initial.modes < 1) out.push_back("initial.modes must be positive");
  if (initial.j < 1 || initial.k < 1) out.push_back("initial.j and initial.k must be positive");
  if (!is_forcing_preset(forcing.preset)) out.push_back("forcing.preset '" + forcing.preset + "' is unknown");
  if (!std::isfinite(forcing.amplitude)) out.push_back("forcing.amplitude must be finite");
  if (!(forcing.ramp >= 0.0 && (forcing.ramp == 0.0 || 2.0 * forcing.ramp < T)))
    out.push_back("forcing.ramp must satisfy 0 <= ramp < T/2");
  if (p_list.empty()) out.push_back("diagnostics.p_list must not be empty");
  for (double p : p_list)
    if (!(p >= 2.0)) out.push_back("diagnostics.p_list entries must lie in [2, inf]");
  if (record_every < 1) out.push_back("diagnostics.every must be positive");
  return out;
}

void SimConfig::validate() const {
  auto errs = problems();
  if (errs.empty()) return;
  std::string msg = "invalid configuration:";
  for (auto& e : errs) msg += "\n  " + e;
  throw PreconditionError(msg);
}

ExponentTable exponent_table(double p) {
  require(p >= 4.0 / 3.0, "exponent table needs p >= 4/3");
  ExponentTable e{};
  e.p = p;
  const bool inf = std::isinf(p);
  e.p_conj = inf ? 1.0 : p / (p - 1.0);
  e.p_star = p >= 2.0 ? infinity : 2.0 * p / (2.0 - p);
  if (inf)
    e.s = infinity;
  else if (p < 2.0)
    e.s = 2.0 * p / (4.0 - p);
  else if (p == 2.0)
    e.s = 1.9;
  else
    e.s = p;
  e.z = inf ? 1.0 : e.s / (e.s - 1.0);
  return e;
}

SimState make_state(const SpectralOps& ops, ScalarField omega, double t) {
  SimState s;
  s.t = t;
  s.psi_hat = std::make_shared<const SpectralCoeffs>(ops.solve_coeffs(omega));
  s.u = ops.velocity_from_stream(s.psi_hat);
  s.psi = ops.synthesize(*s.psi_hat);
  s.omega = std::move(omega);
  return s;
}

SimState step(const SimState& state, const Forcing& forcing, double dt, const SpectralOps& ops,
              StepInfo* info) {
  require(dt > 0.0, "step needs dt > 0");
  ScalarField g = forcing.source(state.t + 0.5 * dt);
  transport::FlowSample flow;
  ScalarField w = transport::advect(state.omega, state.u, g, dt, &flow);
  SimState next = make_state(ops, std::move(w), state.t + dt);
  if (info) {
    info->source = std::move(g);
    info->clamp_count = flow.clamp_count;
    info->clamp_distance = flow.clamp_distance;
    info->cfl_exceeded = flow.cfl_exceeded;
  }
  return next;
}

double energy_residual(const SimState& prev, const SimState& next, const ScalarField& source,
                       double dt, const SpectralOps& ops) {
  const double e0 = ops.energy(*prev.psi_hat);
  const double e1 = ops.energy(*next.psi_hat);
  ScalarField mid = 0.5 * (prev.psi + next.psi);
  return std::abs((e1 - e0) / dt - 2.0 * inner(source, mid));
}

namespace {

struct VelocityCoeffs {
  std::vector<double> a;  // u1: sine x (n1) by cosine y (n2 + 1)
  std::vector<double> b;  // u2: cosine x (n1 + 1) by sine y (n2)
};

VelocityCoeffs velocity_coeffs(const SpectralCoeffs& psi, const SpectralOps& ops) {
  const std::size_t n1 = ops.grid().n1(), n2 = ops.grid().n2();
  VelocityCoeffs v{std::vector<double>(n1 * (n2 + 1), 0.0), std::vector<double>((n1 + 1) * n2, 0.0)};
  for (std::size_t j = 0; j < n1; ++j)
    for (std::size_t k = 0; k < n2; ++k) {
      v.a[j * (n2 + 1) + k + 1] = ops.axis2().wavenumber(k + 1) * psi(j, k);
      v.b[(j + 1) * n2 + k] = -ops.axis1().wavenumber(j + 1) * psi(j, k);
    }
  return v;
}

// Both components of (u.grad)u on the lattice nodes1 x nodes2.
std::pair<std::vector<double>, std::vector<double>> advection_on(const VelocityCoeffs& v,
                                                                 const SpectralOps& ops, Nodes nx,
                                                                 Nodes ny, bool first, bool second) {
  const std::size_t n1 = ops.grid().n1(), n2 = ops.grid().n2();
  const auto& A1 = ops.axis1();
  const auto& A2 = ops.axis2();
  auto u1 = ops.synthesize(v.a, Basis::Sine, nx, Basis::Cosine, ny);
  auto u2 = ops.synthesize(v.b, Basis::Cosine, nx, Basis::Sine, ny);
  std::vector<double> out1, out2;
  if (first) {
    std::vector<double> d1((n1 + 1) * (n2 + 1), 0.0), d2(n1 * n2, 0.0);
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t k = 0; k <= n2; ++k) {
        const double c = v.a[j * (n2 + 1) + k];
        d1[(j + 1) * (n2 + 1) + k] = A1.wavenumber(j + 1) * c;
        if (k > 0) d2[j * n2 + k - 1] = -A2.wavenumber(k) * c;
      }
    auto x1 = ops.synthesize(d1, Basis::Cosine, nx, Basis::Cosine, ny);
    auto x2 = ops.synthesize(d2, Basis::Sine, nx, Basis::Sine, ny);
    out1.resize(u1.size());
    for (std::size_t q = 0; q < u1.size(); ++q) out1[q] = u1[q] * x1[q] + u2[q] * x2[q];
  }
  if (second) {
    std::vector<double> d1(n1 * n2, 0.0), d2((n1 + 1) * (n2 + 1), 0.0);
    for (std::size_t j = 0; j <= n1; ++j)
      for (std::size_t k = 0; k < n2; ++k) {
        const double c = v.b[j * n2 + k];
        if (j > 0) d1[(j - 1) * n2 + k] = -A1.wavenumber(j) * c;
        d2[j * (n2 + 1) + k + 1] = A2.wavenumber(k + 1) * c;
      }
    auto x1 = ops.synthesize(d1, Basis::Sine, nx, Basis::Sine, ny);
    auto x2 = ops.synthesize(d2, Basis::Cosine, nx, Basis::Cosine, ny);
    out2.resize(u1.size());
    for (std::size_t q = 0; q < u1.size(); ++q) out2[q] = u1[q] * x1[q] + u2[q] * x2[q];
  }
  return {std::move(out1), std::move(out2)};
}

// Cubic extrapolation to the boundary node from the four nearest interior values.
double extrapolate(double f1, double f2, double f3, double f4) { return 4.0 * f1 - 6.0 * f2 + 4.0 * f3 - f4; }

// f1 on interior-x by full-y nodes.
std::vector<double> extend_y(const ScalarField& f) {
  const std::size_t n1 = f.grid().n1(), n2 = f.grid().n2();
  std::vector<double> out(n1 * (n2 + 2));
  for (std::size_t i = 0; i < n1; ++i) {
    double* row = &out[i * (n2 + 2)];
    for (std::size_t j = 0; j < n2; ++j) row[j + 1] = f(i, j);
    row[0] = extrapolate(row[1], row[2], row[3], row[4]);
    row[n2 + 1] = extrapolate(row[n2], row[n2 - 1], row[n2 - 2], row[n2 - 3]);
  }
  return out;
}

// f2 on full-x by interior-y nodes.
std::vector<double> extend_x(const ScalarField& f) {
  const std::size_t n1 = f.grid().n1(), n2 = f.grid().n2();
  std::vector<double> out((n1 + 2) * n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) out[(i + 1) * n2 + j] = f(i, j);
  for (std::size_t j = 0; j < n2; ++j) {
    auto at = [&](std::size_t m) { return out[m * n2 + j]; };
    out[j] = extrapolate(at(1), at(2), at(3), at(4));
    out[(n1 + 1) * n2 + j] = extrapolate(at(n1), at(n1 - 1), at(n1 - 2), at(n1 - 3));
  }
  return out;
}

}  // namespace

Pressure recover_pressure(const SimState& state, const VectorField& forcing, const SpectralOps& ops) {
  const Grid& grid = ops.grid();
  const std::size_t n1 = grid.n1(), n2 = grid.n2();
  require(n1 >= 4 && n2 >= 4, "pressure recovery needs at least 4 nodes per axis");
  require(forcing.grid() == grid, "forcing grid does not match");
  const auto v = velocity_coeffs(*state.psi_hat, ops);

  auto F1 = extend_y(forcing.u1);
  auto F2 = extend_x(forcing.u2);
  {
    auto adv = advection_on(v, ops, Nodes::Interior, Nodes::Full, true, false).first;
    for (std::size_t q = 0; q < F1.size(); ++q) F1[q] -= adv[q];
  }
  {
    auto adv = advection_on(v, ops, Nodes::Full, Nodes::Interior, false, true).second;
    for (std::size_t q = 0; q < F2.size(); ++q) F2[q] -= adv[q];
  }
  auto P1 = ops.project(F1, Basis::Sine, Nodes::Interior, Basis::Cosine, Nodes::Full);
  auto P2 = ops.project(F2, Basis::Cosine, Nodes::Full, Basis::Sine, Nodes::Interior);

  const auto& A1 = ops.axis1();
  const auto& A2 = ops.axis2();
  Pressure out;
  out.coeffs.assign((n1 + 1) * (n2 + 1), 0.0);
  for (std::size_t j = 0; j <= n1; ++j)
    for (std::size_t k = 0; k <= n2; ++k) {
      if (j == 0 && k == 0) continue;
      const double a = A1.wavenumber(j), b = A2.wavenumber(k);
      const double w1 = A1.basis_norm(Basis::Sine, j) * A2.basis_norm(Basis::Cosine, k);
      const double w2 = A1.basis_norm(Basis::Cosine, j) * A2.basis_norm(Basis::Sine, k);
      double num = 0.0, den = 0.0;
      if (j > 0) {
        num -= a * P1[(j - 1) * (n2 + 1) + k] * w1;
        den += a * a * w1;
      }
      if (k > 0) {
        num -= b * P2[j * n2 + k - 1] * w2;
        den += b * b * w2;
      }
      out.coeffs[j * (n2 + 1) + k] = num / den;
    }
  out.values = ScalarField(grid, ops.synthesize(out.coeffs, Basis::Cosine, Nodes::Interior,
                                                Basis::Cosine, Nodes::Interior));
  return out;
}

VectorField advective_term(const SimState& state, const SpectralOps& ops) {
  auto [a1, a2] = advection_on(velocity_coeffs(*state.psi_hat, ops), ops, Nodes::Interior,
                               Nodes::Interior, true, true);
  return {ScalarField(ops.grid(), std::move(a1)), ScalarField(ops.grid(), std::move(a2))};
}

VectorField pressure_gradient(const Pressure& pressure, const SpectralOps& ops) {
  const std::size_t n1 = ops.grid().n1(), n2 = ops.grid().n2();
  require(pressure.coeffs.size() == (n1 + 1) * (n2 + 1), "pressure coefficients do not match the grid");
  std::vector<double> d1(n1 * (n2 + 1), 0.0), d2((n1 + 1) * n2, 0.0);
  for (std::size_t j = 0; j <= n1; ++j)
    for (std::size_t k = 0; k <= n2; ++k) {
      const double c = pressure.coeffs[j * (n2 + 1) + k];
      if (j > 0) d1[(j - 1) * (n2 + 1) + k] = -ops.axis1().wavenumber(j) * c;
      if (k > 0) d2[j * n2 + k - 1] = -ops.axis2().wavenumber(k) * c;
    }
  return {ScalarField(ops.grid(), ops.synthesize(d1, Basis::Sine, Nodes::Interior, Basis::Cosine,
                                                 Nodes::Interior)),
          ScalarField(ops.grid(), ops.synthesize(d2, Basis::Cosine, Nodes::Interior, Basis::Sine,
                                                 Nodes::Interior))};
}

double strong_residual(const SimState& state, const VectorField& forcing, const Pressure& pressure,
                       const VectorField& dudt, const SpectralOps& ops) {
  const double scale = l2_norm(forcing) + std::pow(l2_norm(state.u), 2) / ops.grid().rect().area();
  VectorField adv = advective_term(state, ops);
  VectorField gp = pressure_gradient(pressure, ops);
  VectorField r(dudt.u1 + adv.u1 + gp.u1 - forcing.u1, dudt.u2 + adv.u2 + gp.u2 - forcing.u2);
  const double num = l2_norm(r);
  if (num == 0.0) return 0.0;
  return scale > 0.0 ? num / scale : infinity;
}

double boundary_normal_velocity(const SimState& state, const SpectralOps& ops) {
  const std::size_t n1 = ops.grid().n1(), n2 = ops.grid().n2();
  const auto v = velocity_coeffs(*state.psi_hat, ops);
  auto u1 = ops.synthesize(v.a, Basis::Sine, Nodes::Full, Basis::Cosine, Nodes::Full);
  auto u2 = ops.synthesize(v.b, Basis::Cosine, Nodes::Full, Basis::Sine, Nodes::Full);
  double m = 0.0;
  const std::size_t w = n2 + 2;
  for (std::size_t j = 0; j < w; ++j) m = std::max({m, std::abs(u1[j]), std::abs(u1[(n1 + 1) * w + j])});
  for (std::size_t i = 0; i < n1 + 2; ++i) m = std::max({m, std::abs(u2[i * w]), std::abs(u2[i * w + n2 + 1])});
  return m;
}

namespace {

double divergence_ratio(const VectorField& u, const SpectralOps& ops) {
  const double nu = l2_norm(u);
  if (nu == 0.0) return 0.0;
  return l2_norm(ops.divergence(u)) / nu;
}

VectorField difference_quotient(const VectorField& a, const VectorField& b, double span) {
  if (span <= 0.0) return VectorField(a.grid());
  VectorField d(a.u1 - b.u1, a.u2 - b.u2);
  d.u1 *= 1.0 / span;
  d.u2 *= 1.0 / span;
  return d;
}

}  // namespace

RunResult run(const SimConfig& config, const RunOptions& options) {
  config.validate();
  return run_from(config, make_initial(config.initial, config.grid(), config.seed), options);
}

RunResult run_from(const SimConfig& config, ScalarField omega0, const RunOptions& options) {
  config.validate();
  const Grid grid = config.grid();
  require(omega0.grid() == grid, "initial vorticity grid does not match the configuration");
  require(omega0.all_finite(), "initial vorticity has non-finite values");
  const SpectralOps ops(grid);
  const Forcing forcing(config.forcing, grid, config.T);
  const std::size_t S = config.steps();
  const double dt = config.dt;
  const auto& P = config.p_list;

  RunResult res;
  res.steps = S;

  // R_p^p accumulated as ||omega_0||_p^p + int ||g||_p^p; sup form for p = inf.
  std::vector<double> Racc(P.size());
  for (std::size_t q = 0; q < P.size(); ++q) {
    const double v = lp_norm(omega0, P[q]);
    Racc[q] = std::isinf(P[q]) ? v : std::pow(v, P[q]);
  }

  auto make_record = [&](const SimState& s, double eres, std::size_t clamps) {
    DiagnosticsRecord r;
    r.t = s.t;
    r.energy = ops.energy(*s.psi_hat);
    r.energy_residual = eres;
    r.clamp_count = clamps;
    for (std::size_t q = 0; q < P.size(); ++q) {
      const double norm = lp_norm(s.omega, P[q]);
      const double R = std::isinf(P[q]) ? Racc[q] : std::pow(Racc[q], 1.0 / P[q]);
      const double bound = std::exp(s.t) * R;
      r.lp_vorticity.push_back(norm);
      r.apriori_bound.push_back(bound);
      if (norm > bound * 1.02 + 1e-300 && res.apriori_ok) {
        res.apriori_ok = false;
        std::ostringstream os;
        os << "vorticity bound violated at t = " << s.t << " for p = " << P[q] << ": " << norm << " > "
           << bound << " * 1.02";
        res.message = os.str();
      }
    }
    if (options.log_lipschitz) r.ll_norm = transport::log_lipschitz_norm(s.u, config.ll_pairs, config.seed).ll_norm;
    res.max_normal_velocity = std::max(res.max_normal_velocity, boundary_normal_velocity(s, ops));
    if (options.on_record) options.on_record(s);
    return r;
  };

  SimState state = make_state(ops, std::move(omega0), 0.0);
  res.max_divergence_ratio = divergence_ratio(state.u, ops);
  if (options.snapshot_every > 0 && options.on_snapshot) options.on_snapshot(state, 0);

  // Strong residuals need the state after the recorded one; they are filled in one step late.
  bool pending = false;
  SimState rec_state;
  VectorField u_before;
  double t_before = 0.0;
  auto finalize = [&](const VectorField& u_after, double t_after) {
    if (!pending) return;
    pending = false;
    if (!options.strong_residual) return;
    VectorField dudt = difference_quotient(u_after, u_before, t_after - t_before);
    VectorField f = forcing.field(rec_state.t);
    res.records.back().strong_residual = strong_residual(rec_state, f, recover_pressure(rec_state, f, ops), dudt, ops);
  };

  res.records.push_back(make_record(state, 0.0, 0));
  pending = true;
  rec_state = state;
  u_before = state.u;
  t_before = state.t;

  std::size_t clamps = 0;
  for (std::size_t s = 1; s <= S; ++s) {
    StepInfo info;
    SimState next = step(state, forcing, dt, ops, &info);
    next.t = static_cast<double>(s) * dt;
    if (!next.omega.all_finite() || !next.u.u1.all_finite() || !next.u.u2.all_finite()) {
      res.aborted = true;
      res.message = "non-finite field at step " + std::to_string(s) + "; stopped at t = " + std::to_string(state.t);
      break;
    }
    for (std::size_t q = 0; q < P.size() && !forcing.is_zero(); ++q) {
      const double g = lp_norm(info.source, P[q]);
      if (std::isinf(P[q]))
        Racc[q] = std::max(Racc[q], g);
      else
        Racc[q] += dt * std::pow(g, P[q]);
    }
    clamps += info.clamp_count;
    res.max_clamps_per_step = std::max(res.max_clamps_per_step, info.clamp_count);

    const bool record = s % config.record_every == 0 || s == S;
    if (options.divergence_every_step || record)
      res.max_divergence_ratio = std::max(res.max_divergence_ratio, divergence_ratio(next.u, ops));

    finalize(next.u, next.t);
    if (record) {
      res.records.push_back(make_record(next, energy_residual(state, next, info.source, dt, ops), clamps));
      res.records.back().forcing_l2 = forcing.is_zero() ? 0.0 : l2_norm(forcing.field(state.t + 0.5 * dt));
      clamps = 0;
      pending = true;
      rec_state = next;
      u_before = state.u;
      t_before = state.t;
    }
    if (options.snapshot_every > 0 && options.on_snapshot && s % options.snapshot_every == 0)
      options.on_snapshot(next, s);
    state = std::move(next);
  }
  if (pending) {
    if (state.t > t_before)
      finalize(state.u, state.t);
    else
      finalize(state.u, state.t + dt);  // no step taken: zero derivative
  }
  res.clamp_ok = static_cast<double>(res.max_clamps_per_step) <= 1e-6 * static_cast<double>(grid.size());
  if (!res.clamp_ok && res.message.empty())
    res.message = "departure points clamped: " + std::to_string(res.max_clamps_per_step) + " in one step";
  res.final_state = std::move(state);
  return res;
}

double reversibility_error(const SimConfig& config) {
  config.validate();
  require(config.forcing.preset == "zero" || config.forcing.amplitude == 0.0,
          "reversibility test needs zero forcing");
  RunOptions quiet;
  quiet.strong_residual = false;
  quiet.log_lipschitz = false;
  quiet.divergence_every_step = false;
  const ScalarField w0 = make_initial(config.initial, config.grid(), config.seed);
  auto fwd = run_from(config, w0, quiet);
  auto back = run_from(config, -1.0 * fwd.final_state.omega, quiet);
  ScalarField w1 = -1.0 * back.final_state.omega;
  const double n0 = l2_norm(w0);
  require(n0 > 0.0, "reversibility test needs nonzero initial vorticity");
  return l2_norm(w1 - w0) / n0;
}

namespace {

struct TwinSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> Y;
  std::vector<double> zero;
  double energy_max = 0.0;
  double ll_sup = 0.0;
};

// Base run, one perturbed run per delta and an optional identical twin of the base.
TwinSeries twin_series(const SimConfig& cfg, const ScalarField& w0, const ScalarField& zeta,
                       const std::vector<double>& deltas, double dt, std::size_t every, bool zero_twin,
                       bool measure_ll) {
  const Grid grid = cfg.grid();
  const SpectralOps ops(grid);
  const Forcing forcing(cfg.forcing, grid, cfg.T);
  const std::size_t S = static_cast<std::size_t>(std::ceil(cfg.T / dt - 1e-9));

  std::vector<SimState> st;
  st.push_back(make_state(ops, w0));
  for (double d : deltas) st.push_back(make_state(ops, w0 + d * zeta));
  if (zero_twin) st.push_back(make_state(ops, w0));

  TwinSeries out;
  out.Y.assign(deltas.size(), {});
  auto record = [&] {
    out.times.push_back(st[0].t);
    for (std::size_t d = 0; d < deltas.size(); ++d) {
      const double y = l2_norm(VectorField(st[d + 1].u.u1 - st[0].u.u1, st[d + 1].u.u2 - st[0].u.u2));
      out.Y[d].push_back(y * y);
    }
    if (zero_twin) {
      const double y = l2_norm(VectorField(st.back().u.u1 - st[0].u.u1, st.back().u.u2 - st[0].u.u2));
      out.zero.push_back(y * y);
    }
    for (std::size_t r = 0; r < st.size(); ++r) {
      out.energy_max = std::max(out.energy_max, ops.energy(*st[r].psi_hat));
      if (measure_ll && r <= deltas.size())
        out.ll_sup = std::max(out.ll_sup, transport::log_lipschitz_norm(st[r].u, cfg.ll_pairs, cfg.seed).ll_norm);
    }
  };
  record();
  for (std::size_t s = 1; s <= S; ++s) {
    for (auto& x : st) {
      x = step(x, forcing, dt, ops);
      x.t = static_cast<double>(s) * dt;
      if (!x.omega.all_finite()) throw NumericalError("stability run produced non-finite vorticity");
    }
    if (s % every == 0 || s == S) record();
  }
  return out;
}

}  // namespace

StabilityResult yudovich_stability(const SimConfig& config, const std::vector<double>& deltas,
                                   const StabilityOptions& options) {
  config.validate();
  require(!deltas.empty(), "stability experiment needs at least one delta");
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    require(deltas[d] > 0.0, "perturbation sizes must be positive");
    if (d > 0) require(deltas[d] < deltas[d - 1], "perturbation sizes must be decreasing");
  }
  require(config.initial.preset != "log-corner", "stability experiment needs bounded initial vorticity");
  const Grid grid = config.grid();
  const ScalarField w0 = make_initial(config.initial, grid, config.seed);
  const ScalarField zeta = band_limited(grid, options.perturbation_modes, config.seed + 7919, 1.0);

  auto ts = twin_series(config, w0, zeta, deltas, config.dt, config.record_every, options.zero_twin, true);
  StabilityResult r;
  r.deltas = deltas;
  r.times = ts.times;
  r.Y = ts.Y;
  r.ll_sup = ts.ll_sup;
  r.K = options.calibration * ts.ll_sup;
  r.M = options.calibration * std::max(1.0, ts.energy_max);

  for (std::size_t d = 0; d < deltas.size(); ++d) {
    const auto& Y = r.Y[d];
    const double Y0 = Y.front();
    bool bound = Y0 > 0.0;
    bool diff = Y0 > 0.0;
    for (std::size_t q = 0; q < Y.size() && bound; ++q) {
      const double rhs = r.M * std::pow(Y0 / r.M, std::exp(-r.K * r.times[q]));
      if (!(Y[q] <= rhs * (1.0 + 1e-9))) bound = false;
    }
    for (std::size_t q = 0; q + 1 < Y.size() && diff; ++q) {
      const double slope = (Y[q + 1] - Y[q]) / (r.times[q + 1] - r.times[q]);
      double allowed = 0.0;
      for (double y : {Y[q], Y[q + 1]}) {
        const double p = std::max(1.0, std::log(r.M / y));
        allowed = std::max(allowed, r.K * p * std::pow(y, 1.0 - 1.0 / p));
      }
      if (!(slope <= allowed)) diff = false;
    }
    r.bound_ok.push_back(bound);
    r.differential_ok.push_back(diff);
  }
  for (std::size_t q = 0; q < r.times.size(); ++q)
    for (std::size_t d = 1; d < deltas.size(); ++d)
      if (!(r.Y[d][q] < r.Y[d - 1][q])) r.monotone_ok = false;

  if (options.zero_twin) {
    for (double z : ts.zero) r.zero_max = std::max(r.zero_max, z);
    r.zero_ok = r.zero_max <= 1e-20;
  }
  if (options.dt_halving) {
    auto half = twin_series(config, w0, zeta, deltas, 0.5 * config.dt, 2 * config.record_every, false, false);
    for (std::size_t d = 0; d < deltas.size(); ++d) {
      const double a = r.Y[d].back(), b = half.Y[d].back();
      const double change = std::abs(b - a) / a;
      r.dt_change.push_back(change);
      if (!(change <= 0.05)) r.dt_ok = false;
    }
  }
  return r;
}

bool StabilityResult::passed() const {
  for (bool b : bound_ok)
    if (!b) return false;
  for (bool b : differential_ok)
    if (!b) return false;
  return monotone_ok && dt_ok && zero_ok;
}

std::string StabilityResult::report() const {
  std::ostringstream os;
  os.precision(6);
  os << "K = " << K << "  (sup ll_norm " << ll_sup << ")\nM = " << M << "\n";
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    os << "delta " << deltas[d] << ": Y(0) = " << Y[d].front() << ", Y(T) = " << Y[d].back()
       << ", double-log bound " << (bound_ok[d] ? "pass" : "FAIL") << ", differential inequality "
       << (differential_ok[d] ? "pass" : "FAIL");
    if (d < dt_change.size()) os << ", dt/2 change " << dt_change[d];
    os << "\n";
  }
  os << "monotone in delta: " << (monotone_ok ? "pass" : "FAIL") << "\n";
  os << "identical twins: max Y = " << zero_max << " " << (zero_ok ? "pass" : "FAIL") << "\n";
  if (!dt_change.empty()) os << "dt halving within 5%: " << (dt_ok ? "pass" : "FAIL") << "\n";
  os << "overall: " << (passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace euler2d::solver
