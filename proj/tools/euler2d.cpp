// euler2d command-line front end.
// Exit codes: 0 pass, 1 gate failure, 2 usage error, 3 I/O error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "euler2d/bmo.hpp"
#include "euler2d/error.hpp"
#include "euler2d/geometry.hpp"
#include "euler2d/io.hpp"
#include "euler2d/poisson.hpp"
#include "euler2d/solver.hpp"

namespace fs = std::filesystem;
using namespace euler2d;

namespace {

enum Exit { Pass = 0, GateFailure = 1, Usage = 2, Io = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::string step_name(const std::string& stem, std::size_t step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06zu.eul", stem.c_str(), step);
  return buf;
}

const char* verdict(bool ok) { return ok ? "pass" : "FAIL"; }

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  auto v = io::parse_p_list(text);
  if (!v) throw UsageError(flag + " expects a comma separated list of numbers");
  return *v;
}

solver::SimConfig load_config(const std::string& path) {
  auto parsed = io::parse_config_file(path);
  if (!parsed.ok()) throw UsageError(path + ":\n" + parsed.error_text());
  return *parsed.config;
}

// ---- solve ---------------------------------------------------------------

struct SolveArgs {
  std::string config, out;
  std::size_t snap_every = 0;
};

int cmd_solve(const SolveArgs& a) {
  auto cfg = load_config(a.config);
  // the diagnostics table always carries p = 2, 4, 8, inf
  for (double p : {2.0, 4.0, 8.0, solver::infinity})
    if (std::find(cfg.p_list.begin(), cfg.p_list.end(), p) == cfg.p_list.end()) cfg.p_list.push_back(p);
  ensure_dir(a.out);

  solver::RunOptions opts;
  opts.snapshot_every = a.snap_every;
  opts.on_snapshot = [&](const solver::SimState& s, std::size_t step) {
    io::write_snapshot(join(a.out, step_name("omega", step)), s.omega, s.t);
    io::write_snapshot(join(a.out, step_name("u", step)), s.u, s.t);
  };
  auto res = solver::run(cfg, opts);
  io::write_diagnostics_csv(join(a.out, "diagnostics.csv"), res.records, cfg.p_list);

  const auto& first = res.records.front();
  const auto& last = res.records.back();
  std::ostringstream os;
  os.precision(6);
  os << "steps " << res.steps << ", records " << res.records.size() << ", final t " << last.t << "\n";
  os << "energy " << first.energy << " -> " << last.energy << " (relative change "
     << (first.energy > 0 ? (last.energy - first.energy) / first.energy : 0.0) << ")\n";
  os << "a priori vorticity bound: " << verdict(res.apriori_ok) << "\n";
  os << "max divergence / ||u||: " << res.max_divergence_ratio << " " << verdict(res.max_divergence_ratio <= 1e-10)
     << "\n";
  os << "max |u.n| on the boundary: " << res.max_normal_velocity << "\n";
  os << "max clamps per step: " << res.max_clamps_per_step << " " << verdict(res.clamp_ok) << "\n";
  if (res.aborted) os << "aborted: " << res.message << "\n";
  else if (!res.message.empty()) os << res.message << "\n";
  os << "overall: " << (res.passed() ? "PASS" : "FAIL") << "\n";
  io::write_text(join(a.out, "summary.txt"), os.str());
  std::cout << os.str();
  return res.passed() ? Pass : GateFailure;
}

// ---- stability -----------------------------------------------------------

struct StabilityArgs {
  std::string config, out, deltas = "1e-2,1e-3,1e-4";
  bool skip_dt = false;
};

int cmd_stability(const StabilityArgs& a) {
  auto cfg = load_config(a.config);
  auto deltas = parse_list(a.deltas, "--deltas");
  for (std::size_t d = 0; d < deltas.size(); ++d)
    if (!(deltas[d] > 0.0) || (d > 0 && !(deltas[d] < deltas[d - 1])))
      throw UsageError("--deltas must be positive and strictly decreasing");
  ensure_dir(a.out);
  solver::StabilityOptions opts;
  opts.dt_halving = !a.skip_dt;
  auto res = solver::yudovich_stability(cfg, deltas, opts);
  io::write_ytable_csv(join(a.out, "ytable.csv"), res);
  io::write_text(join(a.out, "stability_report.txt"), res.report());
  std::cout << res.report();
  return res.passed() ? Pass : GateFailure;
}

// ---- poisson -------------------------------------------------------------

struct FieldArgs {
  std::vector<double> rect{1.0, 1.0};
  std::vector<std::size_t> n{64, 64};
  std::string input;
  std::vector<std::string> preset;
  std::string out = ".";
};

Grid field_grid(const FieldArgs& a) {
  if (a.rect.size() != 2 || !(a.rect[0] > 0) || !(a.rect[1] > 0)) throw UsageError("--rect needs two positive lengths");
  if (a.n.size() != 2 || a.n[0] < 4 || a.n[1] < 4) throw UsageError("--n needs two resolutions of at least 4");
  return Grid(Rectangle(a.rect[0], a.rect[1]), a.n[0], a.n[1]);
}

ScalarField input_field(const FieldArgs& a) {
  if (!a.input.empty() && !a.preset.empty()) throw UsageError("give either --input or --preset, not both");
  if (!a.input.empty()) {
    auto snap = io::read_snapshot(a.input);
    if (snap.kind != io::FieldKind::Scalar) throw IoError(a.input + ": expected a scalar snapshot");
    return snap.field;
  }
  if (a.preset.empty()) throw UsageError("give --input or --preset");
  return {};
}

ScalarField poisson_preset(const std::vector<std::string>& p, const Grid& g) {
  const auto& name = p[0];
  auto index = [&](std::size_t i, std::size_t fallback) -> std::size_t {
    if (p.size() <= i) return fallback;
    try {
      const long v = std::stol(p[i]);
      if (v < 1) throw UsageError("mode indices must be positive");
      return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
      throw UsageError("bad preset argument '" + p[i] + "'");
    }
  };
  const double L1 = g.rect().L1, L2 = g.rect().L2;
  if (name == "eigenmode") {
    const double a = static_cast<double>(index(1, 1)) * std::numbers::pi / L1;
    const double b = static_cast<double>(index(2, 1)) * std::numbers::pi / L2;
    return ScalarField::sample(g, [&](double x, double y) { return std::sin(a * x) * std::sin(b * y); });
  }
  if (name == "indicator")
    return ScalarField::sample(g, [&](double x, double y) { return x < 0.5 * L1 && y < 0.5 * L2 ? 1.0 : 0.0; });
  if (name == "random") return solver::band_limited(g, 8, index(1, 1));
  throw UsageError("unknown poisson preset '" + name + "' (eigenmode j k | indicator | random seed)");
}

int cmd_poisson(const FieldArgs& a) {
  ScalarField f = input_field(a);
  if (!a.preset.empty()) f = poisson_preset(a.preset, field_grid(a));
  ensure_dir(a.out);
  const Grid& g = f.grid();
  poisson::SpectralOps ops(g);
  auto state = solver::make_state(ops, f);
  io::write_snapshot(join(a.out, "psi.eul"), state.psi);
  io::write_snapshot(join(a.out, "u.eul"), state.u);

  const double fn = l2_norm(f);
  const double curl_err = fn > 0 ? l2_norm(ops.curl_spectral(state.u) - f) / fn : l2_norm(ops.curl_spectral(state.u));
  const double un = l2_norm(state.u);
  const double div = un > 0 ? l2_norm(ops.divergence(state.u)) / un : 0.0;
  const double normal = solver::boundary_normal_velocity(state, ops);
  bool ok = curl_err <= 1e-10 && div <= 1e-10 && normal == 0.0;

  // an eigenmode is solved exactly: psi = f / lambda
  double eig_err = -1.0;
  if (!a.preset.empty() && a.preset[0] == "eigenmode") {
    const double j = a.preset.size() > 1 ? std::stod(a.preset[1]) : 1.0;
    const double k = a.preset.size() > 2 ? std::stod(a.preset[2]) : 1.0;
    const double lambda = std::pow(j * std::numbers::pi / g.rect().L1, 2) + std::pow(k * std::numbers::pi / g.rect().L2, 2);
    eig_err = linf_norm(state.psi - (1.0 / lambda) * f) * lambda / std::max(linf_norm(f), 1e-300);
    ok = ok && eig_err <= 1e-12;
  }

  std::ostringstream os;
  os.precision(6);
  os << "grid " << g.n1() << " x " << g.n2() << " on [0, " << g.rect().L1 << "] x [0, " << g.rect().L2 << "]\n";
  os << "||curl u - f|| / ||f||: " << curl_err << " " << verdict(curl_err <= 1e-10) << "\n";
  os << "||div u|| / ||u||: " << div << " " << verdict(div <= 1e-10) << "\n";
  os << "max |u.n| on the boundary: " << normal << " " << verdict(normal == 0.0) << "\n";
  if (eig_err >= 0.0) os << "eigenmode relative error: " << eig_err << " " << verdict(eig_err <= 1e-12) << "\n";
  os << "energy ||u||^2: " << ops.energy(*state.psi_hat) << "\n";
  os << "overall: " << (ok ? "PASS" : "FAIL") << "\n";
  io::write_text(join(a.out, "poisson_report.txt"), os.str());
  std::cout << os.str();
  return ok ? Pass : GateFailure;
}

// ---- bmo -----------------------------------------------------------------

ScalarField bmo_preset(const std::string& name, const Grid& g) {
  const double L1 = g.rect().L1, L2 = g.rect().L2;
  if (name == "constant") return ScalarField(g, 1.0);
  if (name == "step") return ScalarField::sample(g, [&](double x, double) { return x < 0.5 * L1 ? 1.0 : 0.0; });
  if (name == "log-corner") {
    const double d = g.rect().diameter();
    return ScalarField::sample(g, [&](double x, double y) { return std::log(std::hypot(x, y) / d); });
  }
  if (name == "indicator")
    return ScalarField::sample(g, [&](double x, double y) { return x < 0.5 * L1 && y < 0.5 * L2 ? 1.0 : 0.0; });
  if (name == "checkerboard")
    return ScalarField::sample(g, [&](double x, double y) {
      return (static_cast<int>(4.0 * x / L1) + static_cast<int>(4.0 * y / L2)) % 2 == 0 ? 1.0 : -1.0;
    });
  throw UsageError("unknown bmo preset '" + name + "' (constant|step|log-corner|indicator|checkerboard)");
}

struct BmoArgs : FieldArgs {
  std::string p_list = "2,4,8,16,32";
};

int cmd_bmo(const BmoArgs& a) {
  ScalarField f = input_field(a);
  if (!a.preset.empty()) {
    if (a.preset.size() != 1) throw UsageError("--preset takes one name for bmo");
    f = bmo_preset(a.preset[0], field_grid(a));
  }
  auto ps = parse_list(a.p_list, "--p-list");
  for (double p : ps)
    if (!(p >= 2.0) || std::isinf(p)) throw UsageError("--p-list entries must be finite and at least 2");
  ensure_dir(a.out);

  auto rep = bmo::bmo_norms(f, true);
  const bool nonzero = rep.linf > 0.0;
  bmo::JnCheck jn;
  if (nonzero) jn = bmo::jn_check(f, ps, bmo::calibrate_jn_constant(f.grid().rect(), ps));
  std::ostringstream csv;
  csv.precision(17);
  csv << "quantity,value\n";
  csv << "bmo_z," << rep.bmo_z << "\nbmo_r," << rep.bmo_r << "\nlinf," << rep.linf << "\n";
  csv << "chain_holds," << (rep.chain_holds() ? 1 : 0) << "\n";
  for (auto [p, r] : jn.ratios) csv << "jn_ratio_p" << p << "," << r << "\n";
  csv << "jn_constant," << jn.constant << "\njn_violated," << (jn.violated ? 1 : 0) << "\n";
  io::write_text(join(a.out, "bmo_report.csv"), csv.str());

  std::vector<ScalarField> family{f};
  auto growth = bmo::constant_growth_study(ps, family);
  std::ostringstream gcsv;
  gcsv.precision(17);
  gcsv << "p,ratio\n";
  for (auto [p, r] : growth.table) gcsv << p << "," << r << "\n";
  io::write_text(join(a.out, "growth.csv"), gcsv.str());

  std::cout << csv.str() << "\n" << gcsv.str() << "log-log slope," << growth.slope << "\n";
  const bool ok = rep.chain_holds() && !jn.violated;
  return ok ? Pass : GateFailure;
}

// ---- approx-domain -------------------------------------------------------

struct ApproxArgs {
  std::string body = "square", out = ".";
  std::size_t levels = 5, grid = 64, n0 = 4;
};

int cmd_approx(const ApproxArgs& a) {
  if (a.levels < 1 || a.levels > 12) throw UsageError("--levels must lie in [1, 12]");
  if (a.n0 < 1) throw UsageError("--n0 must be positive");
  geometry::ConvexBody body = a.body == "square" ? geometry::ConvexBody::square(1.0)
                              : a.body == "disk" ? geometry::ConvexBody::disk(1.0)
                                                 : geometry::read_polygon(a.body);
  std::vector<std::size_t> schedule;
  for (std::size_t k = 0; k < a.levels; ++k) schedule.push_back(a.n0 << k);
  geometry::ApproxOptions opts;
  opts.min_nodes = a.grid;
  ensure_dir(a.out);
  auto rep = geometry::certify_approximations(body, schedule, opts);
  for (std::size_t k = 0; k < rep.domains.size(); ++k)
    geometry::write_polygon(rep.domains[k], join(a.out, "level_" + std::to_string(k) + ".txt"));
  io::write_text(join(a.out, "certification.txt"), rep.text());
  std::cout << rep.text();
  return rep.passed() ? Pass : GateFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incompressible Euler flow on a rectangle: solver, stability study and supporting estimates"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "run the vorticity solver from a config file");
  s->add_option("--config", solve.config, "key = value configuration file")->required();
  s->add_option("--out", solve.out, "output directory")->required();
  s->add_option("--snap-every", solve.snap_every, "write omega and u snapshots every N steps (0: never)");

  StabilityArgs stab;
  auto* st = app.add_subcommand("stability", "twin-run stability experiment");
  st->add_option("--config", stab.config, "key = value configuration file")->required();
  st->add_option("--deltas", stab.deltas, "decreasing perturbation sizes, comma separated");
  st->add_option("--out", stab.out, "output directory")->required();
  st->add_flag("--skip-dt-check", stab.skip_dt, "do not repeat the experiment with dt / 2");

  FieldArgs pois;
  auto* p = app.add_subcommand("poisson", "Dirichlet solve and Biot-Savart identity checks");
  p->add_option("--rect", pois.rect, "L1 L2")->expected(2);
  p->add_option("--n", pois.n, "N1 N2")->expected(2);
  p->add_option("--input", pois.input, "scalar snapshot file");
  p->add_option("--preset", pois.preset, "eigenmode j k | indicator | random seed")->expected(1, 3);
  p->add_option("--out", pois.out, "output directory");

  BmoArgs bmoa;
  auto* b = app.add_subcommand("bmo", "BMO norms, John-Nirenberg check and growth table");
  b->add_option("--rect", bmoa.rect, "L1 L2")->expected(2);
  b->add_option("--n", bmoa.n, "N1 N2")->expected(2);
  b->add_option("--input", bmoa.input, "scalar snapshot file");
  b->add_option("--preset", bmoa.preset, "constant | step | log-corner | indicator | checkerboard")->expected(1);
  b->add_option("--p-list", bmoa.p_list, "exponents, comma separated");
  b->add_option("--out", bmoa.out, "output directory");

  ApproxArgs ap;
  auto* d = app.add_subcommand("approx-domain", "nested smooth convex approximations of a convex body");
  d->add_option("--body", ap.body, "square | disk | polygon file");
  d->add_option("--levels", ap.levels, "number of levels");
  d->add_option("--grid", ap.grid, "minimum contour lattice nodes across the body");
  d->add_option("--n0", ap.n0, "first level index n_0; n_k = n_0 2^k");
  d->add_option("--out", ap.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return Usage;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*st) return cmd_stability(stab);
    if (*p) return cmd_poisson(pois);
    if (*b) return cmd_bmo(bmoa);
    if (*d) return cmd_approx(ap);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return Usage;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return Usage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return Io;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return GateFailure;
  }
  return Usage;
}
