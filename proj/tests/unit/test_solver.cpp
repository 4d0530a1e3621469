#include <cmath>
#include <numbers>

#include "doctest.h"
#include "euler2d/error.hpp"
#include "euler2d/quadrature.hpp"
#include "euler2d/solver.hpp"

using namespace euler2d;
using namespace euler2d::solver;
constexpr double pi = std::numbers::pi;

namespace {

SimConfig tg_config(std::size_t n, double dt, double T) {
  SimConfig c;
  c.rect = Rectangle(pi, pi);
  c.n1 = c.n2 = n;
  c.dt = dt;
  c.T = T;
  return c;
}

double rel_l2(const ScalarField& a, const ScalarField& b) { return l2_norm(a - b) / l2_norm(b); }

double node_mean(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s / static_cast<double>(f.data().size());
}

// Max deviation after removing the node mean from both fields.
double max_diff_mod_const(const ScalarField& a, const ScalarField& b) {
  const double ma = node_mean(a), mb = node_mean(b);
  double e = 0.0;
  for (std::size_t q = 0; q < a.data().size(); ++q) e = std::max(e, std::abs((a.data()[q] - ma) - (b.data()[q] - mb)));
  return e;
}

}  // namespace

TEST_CASE("exponent table") {
  auto e2 = exponent_table(2.0);
  CHECK(e2.s == 1.9);
  CHECK(e2.p_conj == doctest::Approx(2.0));
  CHECK(std::isinf(e2.p_star));
  CHECK(e2.z == doctest::Approx(1.9 / 0.9));
  auto e = exponent_table(1.5);
  CHECK(e.s == doctest::Approx(3.0 / 2.5));
  CHECK(e.p_star == doctest::Approx(6.0));
  CHECK(e.p_conj == doctest::Approx(3.0));
  auto e4 = exponent_table(4.0);
  CHECK(e4.s == 4.0);
  CHECK(e4.z == doctest::Approx(4.0 / 3.0));
  auto einf = exponent_table(infinity);
  CHECK(einf.p_conj == 1.0);
  CHECK(einf.z == 1.0);
  // s is continuous from below at 4/3 where s = 1
  CHECK(exponent_table(4.0 / 3.0).s == doctest::Approx(1.0));
  CHECK_THROWS_AS(exponent_table(1.2), PreconditionError);
}

TEST_CASE("config validation names the offending key") {
  auto c = tg_config(32, -1.0, 1.0);
  auto errs = c.problems();
  REQUIRE(!errs.empty());
  bool named = false;
  for (auto& e : errs) named |= e.find("time.dt") != std::string::npos;
  CHECK(named);
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c.dt = 1e-2;
  c.p_list = {1.5};
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c.p_list = {2.0, infinity};
  CHECK_NOTHROW(c.validate());
  CHECK(c.steps() == 100);
}

TEST_CASE("presets") {
  Grid g(Rectangle(pi, 2.0), 24, 20);
  InitialSpec tg;
  tg.j = 2;
  auto w = make_initial(tg, g, 1);
  const double a = 2.0, b = pi / 2.0;
  CHECK(w(3, 5) == doctest::Approx((a * a + b * b) * std::sin(a * g.x(3)) * std::sin(b * g.y(5))));

  InitialSpec rnd;
  rnd.preset = "random";
  rnd.amplitude = 3.0;
  auto r1 = make_initial(rnd, g, 7), r2 = make_initial(rnd, g, 7), r3 = make_initial(rnd, g, 8);
  CHECK(linf_norm(r1) == doctest::Approx(3.0));
  CHECK(r1.data() == r2.data());
  CHECK(r1.data() != r3.data());

  InitialSpec patch;
  patch.preset = "patch";
  auto p = make_initial(patch, g, 1);
  for (double v : p.values()) CHECK((v == 0.0 || v == 1.0));
  CHECK(integral(p) == doctest::Approx(pi * 0.16).epsilon(0.1));

  InitialSpec bad;
  bad.preset = "vortex-sheet";
  CHECK_THROWS_AS(make_initial(bad, g, 1), PreconditionError);
}

TEST_CASE("forcing presets match their analytic curls") {
  Grid g(Rectangle(pi, pi), 48, 48);
  ForcingSpec fs;
  fs.preset = "vortex";
  fs.amplitude = 2.0;
  Forcing f(fs, g, 1.0);
  auto src = f.source(0.3);
  auto exact = ScalarField::sample(g, [](double x, double y) { return 2.0 * 2.0 * std::sin(x) * std::sin(y); });
  CHECK(linf_norm(src - exact) < 1e-5);

  fs.preset = "shear";
  Forcing sh(fs, g, 1.0);
  auto shx = ScalarField::sample(g, [](double, double y) { return -2.0 * std::cos(y); });
  CHECK(linf_norm(sh.source(0.5) - shx) < 1e-4);

  fs.preset = "gradient";
  Forcing gr(fs, g, 1.0);
  CHECK(linf_norm(gr.source(0.5)) < 1e-4);

  fs.preset = "shear";
  fs.ramp = 0.1;
  Forcing ramped(fs, g, 1.0);
  CHECK(ramped.envelope(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ramped.envelope(0.5) == doctest::Approx(2.0));
  CHECK(ramped.envelope(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ramped.envelope(0.1) == doctest::Approx(2.0 * time_cutoff(0.1, 1.0, 0.1)));

  fs.ramp = 0.6;
  CHECK_THROWS_AS(Forcing(fs, g, 1.0), PreconditionError);
}

TEST_CASE("zero state and zero forcing only advance time") {
  Grid g(Rectangle(1.0, 1.0), 16, 16);
  poisson::SpectralOps ops(g);
  auto s = make_state(ops, ScalarField(g), 0.25);
  Forcing f(ForcingSpec{}, g, 1.0);
  StepInfo info;
  auto next = step(s, f, 1e-2, ops, &info);
  CHECK(next.t == doctest::Approx(0.26));
  CHECK(next.omega.data() == s.omega.data());
  CHECK(linf_norm(next.u) == 0.0);
  CHECK(info.clamp_count == 0);
}

TEST_CASE("steady Taylor-Green: one step barely moves the state") {
  auto c = tg_config(128, 1e-3, 1.0);
  poisson::SpectralOps ops(c.grid());
  auto s = make_state(ops, make_initial(c.initial, c.grid(), 1));
  Forcing f(c.forcing, c.grid(), c.T);
  auto next = step(s, f, c.dt, ops);
  CHECK(rel_l2(next.omega, s.omega) <= 1e-6);
  CHECK(boundary_normal_velocity(next, ops) == 0.0);
}

TEST_CASE("from rest, one step produces dt times the midpoint curl") {
  Grid g(Rectangle(pi, pi), 64, 64);
  poisson::SpectralOps ops(g);
  ForcingSpec fs;
  fs.preset = "shear";
  fs.ramp = 0.2;
  Forcing f(fs, g, 1.0);
  for (double dt : {4e-2, 2e-2}) {
    auto s = make_state(ops, ScalarField(g), 0.1);
    auto next = step(s, f, dt, ops);
    const double eta = time_cutoff(0.1 + dt / 2, 1.0, 0.2);
    auto oracle = ScalarField::sample(g, [&](double, double y) { return -dt * eta * std::cos(y); });
    // the analytic curl differs from the fourth-order differences by O(h^4)
    CHECK(linf_norm(next.omega - oracle) <= dt * dt * 1e-1);
  }
}

TEST_CASE("energy residual") {
  Grid g(Rectangle(pi, pi), 32, 32);
  poisson::SpectralOps ops(g);
  auto zero = make_state(ops, ScalarField(g));
  CHECK(energy_residual(zero, zero, ScalarField(g), 1e-3, ops) == 0.0);

  // frozen u with f = u: the work (curl u, psi) = (omega, psi) = E
  InitialSpec rnd;
  rnd.preset = "random";
  auto s = make_state(ops, make_initial(rnd, g, 3));
  const double E = ops.energy(*s.psi_hat);
  CHECK(energy_residual(s, s, s.omega, 1e-3, ops) == doctest::Approx(2.0 * E).epsilon(1e-12));
}

TEST_CASE("steady Taylor-Green energy residual is tiny at n = 256") {
  auto c = tg_config(256, 1e-3, 1.0);
  poisson::SpectralOps ops(c.grid());
  auto s = make_state(ops, make_initial(c.initial, c.grid(), 1));
  Forcing f(c.forcing, c.grid(), c.T);
  StepInfo info;
  auto next = step(s, f, c.dt, ops, &info);
  CHECK(energy_residual(s, next, info.source, c.dt, ops) <= 1e-6 * ops.energy(*s.psi_hat));
}

TEST_CASE("pressure recovery") {
  Grid g(Rectangle(pi, pi), 64, 64);
  poisson::SpectralOps ops(g);

  SUBCASE("Taylor-Green closed form") {
    auto s = make_state(ops, make_initial(InitialSpec{}, g, 1));
    auto p = recover_pressure(s, VectorField(g), ops);
    auto exact = ScalarField::sample(g, [](double x, double y) { return (std::cos(2 * x) + std::cos(2 * y)) / 4; });
    CHECK(max_diff_mod_const(p.values, exact) <= 1e-6);
    CHECK(p.coeffs[0] == 0.0);
    // and grad pi cancels the advective term
    auto adv = advective_term(s, ops);
    auto gp = pressure_gradient(p, ops);
    CHECK(linf_norm(VectorField(adv.u1 + gp.u1, adv.u2 + gp.u2)) < 1e-12);
  }
  SUBCASE("pure gradient forcing is absorbed") {
    auto zero = make_state(ops, ScalarField(g));
    auto phi = [](double x, double y) { return std::cos(x) * std::cos(2 * y) + 0.5 * std::cos(3 * y); };
    auto f = VectorField::sample(g, [](double x, double y) {
      return std::pair{-std::sin(x) * std::cos(2 * y), -2 * std::cos(x) * std::sin(2 * y) - 1.5 * std::sin(3 * y)};
    });
    auto p = recover_pressure(zero, f, ops);
    // the only error is the cubic extrapolation of f to boundary nodes, O(h^4)
    CHECK(max_diff_mod_const(p.values, ScalarField::sample(g, phi)) < 1e-5);
  }
  SUBCASE("generic gradient converges under refinement") {
    auto phi = [](double x, double y) { return std::exp(0.3 * x) * std::sin(y) + x * y; };
    double prev = 1.0;
    for (std::size_t n : {32u, 64u, 128u}) {
      Grid gn(Rectangle(pi, pi), n, n);
      poisson::SpectralOps on(gn);
      auto f = VectorField::sample(gn, [](double x, double y) {
        return std::pair{0.3 * std::exp(0.3 * x) * std::sin(y) + y, std::exp(0.3 * x) * std::cos(y) + x};
      });
      auto p = recover_pressure(make_state(on, ScalarField(gn)), f, on);
      const double err = max_diff_mod_const(p.values, ScalarField::sample(gn, phi));
      CHECK(err < 0.7 * prev);
      prev = err;
    }
    CHECK(prev < 1e-2);
  }
  SUBCASE("divergence-free tangential forcing gives no pressure") {
    ForcingSpec fs;
    fs.preset = "vortex";
    Forcing f(fs, g, 1.0);
    auto p = recover_pressure(make_state(ops, ScalarField(g)), f.field(0.5), ops);
    CHECK(linf_norm(p.values) < 1e-6 * linf_norm(f.field(0.5)));
  }
}

TEST_CASE("strong residual") {
  SUBCASE("zero state") {
    Grid g(Rectangle(1, 1), 16, 16);
    poisson::SpectralOps ops(g);
    auto z = make_state(ops, ScalarField(g));
    auto p = recover_pressure(z, VectorField(g), ops);
    CHECK(strong_residual(z, VectorField(g), p, VectorField(g), ops) == 0.0);
  }
  SUBCASE("steady Taylor-Green at n = 128") {
    auto c = tg_config(128, 1e-3, 5e-3);
    c.record_every = 1;
    RunOptions o;
    o.log_lipschitz = false;
    auto r = run(c, o);
    REQUIRE(r.records.size() == 6);
    for (auto& rec : r.records) CHECK(rec.strong_residual <= 1e-5);
  }
  SUBCASE("decreases under refinement at fixed dt / h") {
    double prev = infinity;
    for (std::size_t n : {64u, 128u, 256u}) {
      const double h = pi / static_cast<double>(n + 1);
      auto c = tg_config(n, 0.04 * h, 4 * 0.04 * h);
      c.record_every = 2;
      RunOptions o;
      o.log_lipschitz = false;
      o.divergence_every_step = false;
      auto r = run(c, o);
      const double res = r.records[1].strong_residual;
      CHECK(res < prev);
      prev = res;
    }
  }
}

TEST_CASE("runs: records, gates, determinism") {
  auto c = tg_config(48, 1e-2, 0.1);
  c.initial.preset = "random";
  c.record_every = 3;
  auto r = run(c);
  CHECK(r.passed());
  CHECK(r.steps == 10);
  CHECK(r.records.size() == 5);  // t = 0, 3, 6, 9 and the final step
  for (std::size_t q = 1; q < r.records.size(); ++q) CHECK(r.records[q].t > r.records[q - 1].t);
  CHECK(r.records.back().t == doctest::Approx(0.1));
  CHECK(r.max_divergence_ratio < 1e-10);
  CHECK(r.max_normal_velocity == 0.0);
  for (auto& rec : r.records) {
    CHECK(std::isfinite(rec.strong_residual));
    CHECK(rec.ll_norm > 0.0);
    for (std::size_t q = 0; q < rec.lp_vorticity.size(); ++q) CHECK(rec.lp_vorticity[q] <= rec.apriori_bound[q] * 1.02);
  }
  auto again = run(c);
  CHECK(again.final_state.omega.data() == r.final_state.omega.data());

  c.initial.preset = "taylor-green";
  ScalarField bad(c.grid());
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(run_from(c, bad), PreconditionError);
}

TEST_CASE("unforced transport conserves vorticity norms") {
  auto c = tg_config(96, 5e-3, 0.25);
  c.initial.preset = "random";
  RunOptions o;
  o.strong_residual = false;
  o.log_lipschitz = false;
  auto r = run(c, o);
  const auto& first = r.records.front();
  const auto& last = r.records.back();
  for (std::size_t q = 0; q < 3; ++q)
    CHECK(std::abs(last.lp_vorticity[q] / first.lp_vorticity[q] - 1.0) < 1e-2);
  CHECK(std::abs(last.energy / first.energy - 1.0) < 1e-3);
}

TEST_CASE("forced run respects the a priori vorticity bound") {
  auto c = tg_config(48, 1e-2, 0.5);
  c.initial.preset = "patch";
  c.forcing.preset = "vortex";
  c.forcing.amplitude = 3.0;
  c.forcing.ramp = 0.05;
  RunOptions o;
  o.strong_residual = false;
  auto r = run(c, o);
  CHECK(r.apriori_ok);
  CHECK(r.records.back().lp_vorticity[0] > r.records.front().lp_vorticity[0]);
}

TEST_CASE("reversibility at coarse resolution") {
  auto c = tg_config(64, 1e-2, 0.3);
  c.initial.preset = "random";
  CHECK(reversibility_error(c) <= 0.05);
  c.forcing.preset = "shear";
  CHECK_THROWS_AS(reversibility_error(c), PreconditionError);
}

TEST_CASE("stability experiment at coarse resolution") {
  auto c = tg_config(32, 1e-2, 0.3);
  c.record_every = 5;
  auto r = yudovich_stability(c, {1e-2, 1e-3, 1e-4});
  CHECK(r.zero_ok);
  CHECK(r.zero_max == 0.0);
  CHECK(r.monotone_ok);
  for (std::size_t d = 0; d < 3; ++d) {
    CHECK(r.bound_ok[d]);
    CHECK(r.differential_ok[d]);
    // linear regime: Y scales like delta^2
    if (d > 0) CHECK(r.Y[d - 1].back() / r.Y[d].back() == doctest::Approx(100.0).epsilon(0.05));
  }
  CHECK(r.dt_ok);
  CHECK(r.passed());
  CHECK(r.report().find("overall: PASS") != std::string::npos);
  CHECK_THROWS_AS(yudovich_stability(c, {1e-3, 1e-2}), PreconditionError);
}
