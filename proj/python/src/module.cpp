#include <sstream>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bolab/cli.hpp"
#include "bolab/errors.hpp"
#include "bolab/experiments.hpp"
#include "bolab/littlewood_paley.hpp"
#include "bolab/resonance.hpp"
#include "bolab/solver.hpp"
#include "bolab/spectral.hpp"

namespace py = pybind11;
using namespace bolab;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

SpectralField to_field(const Array& samples, double length) {
  if (samples.ndim() != 1) throw ValidationError("samples must be one-dimensional");
  const auto* p = samples.data();
  return SpectralField(Grid(static_cast<std::size_t>(samples.size()), length),
                       std::vector<double>(p, p + samples.size()));
}

Array to_array(const SpectralField& f) {
  const auto s = f.samples();
  Array out(static_cast<py::ssize_t>(s.size()));
  std::copy(s.begin(), s.end(), out.mutable_data());
  return out;
}

py::dict ratio_dict(const RatioStats& st) {
  py::dict d;
  d["min_ratio"] = st.min_ratio;
  d["max_ratio"] = st.max_ratio;
  d["samples"] = st.samples;
  d["attempts"] = st.attempts;
  return d;
}

py::dict solve_py(const Array& u0, double length, double dt, double t_final,
                  std::size_t snapshot_stride, bool dealias, double cfl,
                  std::vector<double> diagnostic_s) {
  SolverConfig cfg{Grid(static_cast<std::size_t>(u0.size()), length), dt, t_final};
  cfg.snapshot_stride = snapshot_stride;
  cfg.dealias = dealias;
  cfg.cfl = cfl;
  cfg.diagnostic_s = std::move(diagnostic_s);
  SolutionTrajectory traj;
  {
    const auto field = to_field(u0, length);
    py::gil_scoped_release release;
    traj = solve(field, cfg);
  }
  const auto rows = static_cast<py::ssize_t>(traj.fields.size());
  const auto cols = static_cast<py::ssize_t>(u0.size());
  py::array_t<double> fields({rows, cols});
  auto view = fields.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < rows; ++i) {
    const auto s = traj.fields[static_cast<std::size_t>(i)].samples();
    for (py::ssize_t j = 0; j < cols; ++j) view(i, j) = s[static_cast<std::size_t>(j)];
  }
  std::vector<double> mass, momentum, ham;
  std::vector<std::vector<double>> sobolev;
  for (const auto& d : traj.diagnostics) {
    mass.push_back(d.mass);
    momentum.push_back(d.momentum);
    ham.push_back(d.hamiltonian);
    sobolev.push_back(d.sobolev);
  }
  py::dict out;
  out["times"] = traj.times;
  out["fields"] = fields;
  out["mass"] = mass;
  out["momentum"] = momentum;
  out["hamiltonian"] = ham;
  out["sobolev"] = sobolev;
  out["diagnostic_s"] = traj.diagnostic_s;
  std::vector<std::pair<double, double>> schedule;
  for (const auto& c : traj.dt_schedule) schedule.emplace_back(c.time, c.dt);
  out["dt_schedule"] = schedule;
  return out;
}

py::tuple run_cli_py(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = run_cli(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Benjamin-Ono numerical lab core";

  auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  (void)validation;

  m.def("omega", &omega, py::arg("xi"), "Dispersion relation xi |xi|.");
  m.def(
      "omega_n", [](const std::vector<double>& xi) { return omega_n(xi); }, py::arg("xi"),
      "Resonance function sum omega(xi_i) of a zero-sum tuple.");
  m.def(
      "hilbert_transform",
      [](const Array& u, double length) { return to_array(hilbert_transform(to_field(u, length))); },
      py::arg("samples"), py::arg("length"));
  m.def(
      "derivative",
      [](const Array& u, double length, int order) {
        return to_array(derivative(to_field(u, length), order));
      },
      py::arg("samples"), py::arg("length"), py::arg("order") = 1);
  m.def(
      "free_propagator",
      [](const Array& u, double length, double t) {
        return to_array(free_propagator(to_field(u, length), t));
      },
      py::arg("samples"), py::arg("length"), py::arg("t"));
  m.def("chi", &chi, py::arg("k"), py::arg("xi"), "Littlewood-Paley multiplier of band k.");
  m.def(
      "project_band",
      [](const Array& u, double length, long k) {
        return to_array(project_band(to_field(u, length), k));
      },
      py::arg("samples"), py::arg("length"), py::arg("k"));
  m.def(
      "sobolev_norm",
      [](const Array& u, double length, double s) { return sobolev_norm(to_field(u, length), s).value; },
      py::arg("samples"), py::arg("length"), py::arg("s"));
  m.def(
      "besov_sup_norm",
      [](const Array& u, double length, double s) {
        return besov_sup_norm(to_field(u, length), s).value;
      },
      py::arg("samples"), py::arg("length"), py::arg("s"));
  m.def(
      "check_res3",
      [](std::size_t samples, std::vector<long> k, std::uint64_t seed) {
        return ratio_dict(check_res3(samples, DyadicProfile{std::move(k)}, seed));
      },
      py::arg("samples"), py::arg("profile"), py::arg("seed") = 1);
  m.def(
      "check_res4",
      [](std::size_t samples, std::vector<long> k, std::uint64_t seed) {
        return ratio_dict(check_res4(samples, DyadicProfile{std::move(k)}, seed));
      },
      py::arg("samples"), py::arg("profile"), py::arg("seed") = 1);
  m.def(
      "hamiltonian",
      [](const Array& u, double length) { return hamiltonian(to_field(u, length)); },
      py::arg("samples"), py::arg("length"));
  m.def("solve", &solve_py, py::arg("u0"), py::arg("length"), py::arg("dt"), py::arg("t_final"),
        py::arg("snapshot_stride") = 1, py::arg("dealias") = true, py::arg("cfl") = 0.5,
        py::arg("diagnostic_s") = std::vector<double>{1.0},
        "Unforced solve; returns times, fields (snapshots x M) and diagnostics.");
  m.def(
      "periodic_travelling_wave",
      [](std::size_t num_points, double length, double c, double x0) {
        return to_array(periodic_travelling_wave(Grid(num_points, length), c, x0));
      },
      py::arg("num_points"), py::arg("length"), py::arg("c"), py::arg("x0"));
  m.def("periodic_travelling_wave_speed", &periodic_travelling_wave_speed, py::arg("length"),
        py::arg("c"));
  m.def(
      "bona_smith_report", [] { return bona_smith(BonaSmithParams{}).to_json(); },
      "Default Bona-Smith experiment as a JSON report.");
  m.def("run_cli", &run_cli_py, py::arg("args"),
        "Runs a bo_lab subcommand in-process; returns (exit_code, stdout, stderr).");
}
