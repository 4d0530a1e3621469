#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "euler2d/bmo.hpp"
#include "euler2d/error.hpp"
#include "euler2d/geometry.hpp"
#include "euler2d/io.hpp"
#include "euler2d/poisson.hpp"
#include "euler2d/solver.hpp"

namespace py = pybind11;
using namespace euler2d;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

ScalarField to_field(const Array& a, double L1, double L2) {
  if (a.ndim() != 2) throw PreconditionError("expected a 2-d array of interior node values");
  Grid g(Rectangle(L1, L2), static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const ScalarField& f) {
  Array out({f.grid().n1(), f.grid().n2()});
  std::copy(f.data().begin(), f.data().end(), out.mutable_data());
  return out;
}

solver::SimConfig config_from_text(const std::string& text) {
  auto r = io::parse_config(text);
  if (!r.ok()) throw PreconditionError(r.error_text());
  return *r.config;
}

py::dict record_dict(const solver::DiagnosticsRecord& r) {
  py::dict d;
  d["t"] = r.t;
  d["energy"] = r.energy;
  d["lp_vorticity"] = r.lp_vorticity;
  d["apriori_bound"] = r.apriori_bound;
  d["ll_norm"] = r.ll_norm;
  d["energy_residual"] = r.energy_residual;
  d["strong_residual"] = r.strong_residual;
  d["clamp_count"] = r.clamp_count;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Incompressible Euler flow on a rectangle";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "dirichlet_solve", [](const Array& f, double L1, double L2) { return to_array(poisson::dirichlet_solve(to_field(f, L1, L2))); },
      py::arg("f"), py::arg("L1") = 1.0, py::arg("L2") = 1.0,
      "Solve -lap(psi) = f with psi = 0 on the boundary; f holds interior node values.");

  m.def(
      "biot_savart",
      [](const Array& w, double L1, double L2) {
        auto u = poisson::biot_savart(to_field(w, L1, L2));
        return py::make_tuple(to_array(u.u1), to_array(u.u2));
      },
      py::arg("omega"), py::arg("L1") = 1.0, py::arg("L2") = 1.0, "Velocity (u1, u2) of a vorticity field.");

  m.def(
      "curl",
      [](const Array& w, double L1, double L2) {
        const Grid g = to_field(w, L1, L2).grid();
        poisson::SpectralOps ops(g);
        return to_array(ops.curl_spectral(ops.biot_savart(to_field(w, L1, L2))));
      },
      py::arg("omega"), py::arg("L1") = 1.0, py::arg("L2") = 1.0, "curl of the Biot-Savart velocity of omega.");

  m.def(
      "solve",
      [](const std::string& config) {
        solver::RunResult res;
        {
          py::gil_scoped_release release;
          res = solver::run(config_from_text(config));
        }
        py::list records;
        for (const auto& r : res.records) records.append(record_dict(r));
        py::dict d;
        d["records"] = records;
        d["omega"] = to_array(res.final_state.omega);
        d["passed"] = res.passed();
        d["apriori_ok"] = res.apriori_ok;
        d["max_divergence_ratio"] = res.max_divergence_ratio;
        d["max_normal_velocity"] = res.max_normal_velocity;
        d["message"] = res.message;
        return d;
      },
      py::arg("config"), "Run the solver from key = value configuration text.");

  m.def(
      "stability",
      [](const std::string& config, std::vector<double> deltas, bool dt_halving) {
        solver::StabilityOptions o;
        o.dt_halving = dt_halving;
        solver::StabilityResult r;
        {
          py::gil_scoped_release release;
          r = solver::yudovich_stability(config_from_text(config), deltas, o);
        }
        py::dict d;
        d["times"] = r.times;
        d["Y"] = r.Y;
        d["K"] = r.K;
        d["M"] = r.M;
        d["passed"] = r.passed();
        d["report"] = r.report();
        return d;
      },
      py::arg("config"), py::arg("deltas") = std::vector<double>{1e-2, 1e-3, 1e-4}, py::arg("dt_halving") = true,
      "Twin-run stability experiment.");

  m.def(
      "bmo_norms",
      [](const Array& f, double L1, double L2) {
        auto r = bmo::bmo_norms(to_field(f, L1, L2), true);
        py::dict d;
        d["bmo_z"] = r.bmo_z;
        d["bmo_r"] = r.bmo_r;
        d["linf"] = r.linf;
        d["chain_holds"] = r.chain_holds();
        return d;
      },
      py::arg("f"), py::arg("L1") = 1.0, py::arg("L2") = 1.0);

  m.def(
      "w2bmo_ratio", [](const Array& f, double L1, double L2) { return bmo::w2bmo_ratio(to_field(f, L1, L2)); },
      py::arg("f"), py::arg("L1") = 1.0, py::arg("L2") = 1.0);

  m.def(
      "approx_domain",
      [](const std::string& body, std::vector<std::size_t> schedule) {
        auto b = body == "square" ? geometry::ConvexBody::square(1.0)
                 : body == "disk" ? geometry::ConvexBody::disk(1.0)
                                  : geometry::read_polygon(body);
        auto rep = geometry::certify_approximations(b, schedule);
        py::list domains;
        for (const auto& d : rep.domains) {
          py::list pts;
          for (auto p : d.vertices()) pts.append(py::make_tuple(p.x, p.y));
          domains.append(pts);
        }
        py::dict d;
        d["domains"] = domains;
        d["passed"] = rep.passed();
        d["report"] = rep.text();
        return d;
      },
      py::arg("body") = "square", py::arg("schedule") = std::vector<std::size_t>{4, 8, 16, 32, 64});

  m.def(
      "read_snapshot",
      [](const std::string& path) {
        auto s = io::read_snapshot(path);
        py::dict d;
        d["time"] = s.time;
        d["L1"] = s.field.grid().rect().L1;
        d["L2"] = s.field.grid().rect().L2;
        if (s.kind == io::FieldKind::Vector)
          d["field"] = py::make_tuple(to_array(s.field), to_array(s.second));
        else
          d["field"] = to_array(s.field);
        return d;
      },
      py::arg("path"));

  m.def(
      "write_snapshot",
      [](const std::string& path, const Array& f, double L1, double L2, double time) {
        io::write_snapshot(path, to_field(f, L1, L2), time);
      },
      py::arg("path"), py::arg("field"), py::arg("L1") = 1.0, py::arg("L2") = 1.0, py::arg("time") = 0.0);
}
