#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "openmhd/config.hpp"
#include "openmhd/error.hpp"
#include "openmhd/parallel.hpp"
#include "openmhd/runner.hpp"
#include "openmhd/scenarios.hpp"

namespace py = pybind11;
using namespace openmhd;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_python(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

// A str names a built-in scenario; anything else is a config mapping.
ScenarioConfig resolve(const py::object& config) {
  if (py::isinstance<py::str>(config)) return builtin_scenario(config.cast<std::string>());
  return config_from_json(from_python(config));
}

py::array_t<double> grid_array(const ScalarField& f, int nx, int ny) {
  py::array_t<double> a({ny + 1, nx + 1});
  std::copy(f.values.begin(), f.values.end(), a.mutable_data());
  return a;
}

py::array_t<double> grid_array(const VectorField& f, int nx, int ny) {
  py::array_t<double> a({3, ny + 1, nx + 1});
  const std::size_t n = f.c[0].size();
  for (std::size_t c = 0; c < 3; ++c) std::copy(f.c[c].values.begin(), f.c[c].values.end(), a.mutable_data() + c * n);
  return a;
}

}  // namespace

PYBIND11_MODULE(openmhd, m) {
  m.doc() = "Compressible MHD with heat conduction advanced by Picard time windows";

  // The module attribute keeps the type alive.
  static PyObject* error_type = py::exception<Error>(m, "OpenMHDError", PyExc_RuntimeError).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::list issues;
      if (const auto* ce = dynamic_cast<const ConfigError*>(&e))
        for (const auto& s : ce->issues()) issues.append(s);
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      inst.attr("issues") = issues;
      PyErr_SetObject(error_type, inst.ptr());
    }
  });

  m.def("list_scenarios", &scenario_library, "Sorted names of the built-in scenarios.");

  m.def(
      "scenario_config", [](const std::string& name) { return to_python(config_to_json(builtin_scenario(name))); },
      py::arg("name"), "Built-in scenario as a config dict.");

  m.def(
      "validate_config", [](const py::object& config) { validate_config(resolve(config)); }, py::arg("config"),
      "Raises OpenMHDError listing every violation.");

  m.def("exponent_condition_holds", &exponent_condition_holds, py::arg("p"), py::arg("q"), py::arg("d") = 3);

  m.def("set_num_threads", &set_num_threads, py::arg("n"));

  m.def(
      "run",
      [](const py::object& config, const std::string& out_dir, double perturbation, std::uint64_t seed) {
        const ScenarioConfig c = resolve(config);
        RunSettings s;
        s.out_dir = out_dir;
        s.fixed_point.start_perturbation = perturbation;
        s.fixed_point.perturbation_seed = seed;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_scenario(c, s);
        }
        py::dict out;
        out["report"] = to_python(r.report);
        out["exit_code"] = r.exit_code;
        out["written_to"] = r.written_to;
        py::list times;
        for (const auto& st : r.trajectory) times.append(st.time);
        out["times"] = times;
        if (!r.trajectory.empty()) {
          const State& last = r.trajectory.back();
          py::dict fields;
          fields["rho"] = grid_array(last.rho, c.grid.nx, c.grid.ny);
          fields["u"] = grid_array(last.u, c.grid.nx, c.grid.ny);
          fields["theta"] = grid_array(last.theta, c.grid.nx, c.grid.ny);
          fields["b"] = grid_array(last.b, c.grid.nx, c.grid.ny);
          out["final"] = fields;
        }
        return out;
      },
      py::arg("config"), py::arg("out_dir") = "", py::arg("perturbation") = 0.0, py::arg("seed") = 0,
      "Runs a scenario (name or config dict). Returns the report, exit code and final fields.");

  m.def(
      "convergence_study",
      [](const py::object& config, int levels) {
        const ScenarioConfig c = resolve(config);
        ConvergenceStudy s;
        {
          py::gil_scoped_release release;
          s = convergence_study(c, levels);
        }
        return to_python(to_json(s));
      },
      py::arg("config"), py::arg("levels") = 3);
}
