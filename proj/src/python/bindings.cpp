// Python module _core. Configs and summaries cross the boundary as JSON text;
// the package wrapper turns them into dicts.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nitsche/beam.hpp"
#include "nitsche/driver.hpp"
#include "nitsche/errors.hpp"
#include "nitsche/export.hpp"
#include "nitsche/studies.hpp"

namespace py = pybind11;
using namespace nitsche;

namespace {

py::dict run_config(const std::string& config_json, const std::string& out_dir) {
  const Scenario sc = scenario_from_json(nlohmann::json::parse(config_json));
  const RunResult r = run_scenario(sc);

  const auto rows = profile_rows(r.post);
  Eigen::MatrixXd profile(static_cast<Eigen::Index>(rows.size()), 9);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& p = rows[i];
    profile.row(static_cast<Eigen::Index>(i)) << p.segment, p.s, p.u_n, p.u_t, p.theta, p.jump_n_1, p.jump_n_2,
        p.sigma_n_1, p.sigma_n_2;
  }
  Eigen::MatrixXd iface(static_cast<Eigen::Index>(r.post.interface_displacement.size()), 3);
  for (std::size_t i = 0; i < r.post.interface_displacement.size(); ++i) {
    const Vec2& u = r.post.interface_displacement[i];
    iface.row(static_cast<Eigen::Index>(i)) << u.x(), u.y(), r.post.interface_rotation[i];
  }

  py::dict d;
  d["summary"] = run_summary(sc, r).dump();
  d["profile"] = profile;
  d["interface"] = iface;
  d["values"] = Eigen::VectorXd(r.solution.values);
  py::list written;
  if (!out_dir.empty()) {
    for (const auto& f : write_outputs(sc, r, out_dir)) written.append(f.string());
  }
  d["files"] = written;
  return d;
}

py::dict patch_test(double h_top, double ratio, double gamma0_factor) {
  PatchTestOptions o;
  o.h_top = h_top;
  o.h_bottom = h_top / ratio;
  o.gamma0_factor = gamma0_factor;
  const PatchTestReport r = run_patch_test(o);
  py::dict d;
  d["solved"] = r.solved;
  d["passed"] = r.passed;
  d["max_error"] = r.max_error;
  d["max_jump"] = r.max_jump;
  d["dofs"] = r.dofs;
  d["diagnostic"] = r.diagnostic;
  return d;
}

py::dict convergence(const std::string& mode, double alpha, double beta, const std::vector<int>& levels) {
  ConvergenceOptions o;
  o.mode = parse_mode(mode);
  o.alpha = alpha;
  o.beta = beta;
  o.levels = levels;
  const ConvergenceReport r = run_convergence(o);
  py::list rows;
  for (const auto& row : r.rows) {
    py::dict x;
    x["n"] = row.n;
    x["h"] = row.h;
    x["dofs"] = row.dofs;
    x["l2_error"] = row.l2_error;
    x["energy_error"] = row.energy_error;
    rows.append(x);
  }
  py::dict d;
  d["rows"] = rows;
  d["l2_slope"] = r.l2_slope ? py::object(py::float_(*r.l2_slope)) : py::none();
  d["energy_slope"] = r.energy_slope ? py::object(py::float_(*r.energy_slope)) : py::none();
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hybridized Nitsche coupling of plane-stress elasticity with interface beams";

  static py::exception<Error> base(m, "NitscheError");
  static py::exception<ConfigError> config_error(m, "ConfigError", base.ptr());
  static py::exception<InputError> input_error(m, "InputError", base.ptr());
  static py::exception<GeometryError> geometry_error(m, "GeometryError", base.ptr());
  static py::exception<SolverError> solver_error(m, "SolverError", base.ptr());
  static py::exception<IoError> io_error(m, "IoError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      config_error(e.what());
    } catch (const InputError& e) {
      input_error(e.what());
    } catch (const GeometryError& e) {
      geometry_error(e.what());
    } catch (const SolverError& e) {
      solver_error(e.what());
    } catch (const IoError& e) {
      io_error(e.what());
    } catch (const Error& e) {
      base(e.what());
    } catch (const nlohmann::json::exception& e) {
      config_error(e.what());
    }
  });

  m.def("builtin_scenario_names", &builtin_scenario_names);
  m.def("builtin_scenario_json", [](const std::string& name) { return scenario_to_json(builtin_scenario(name)).dump(); });
  m.def("validate_json", [](const std::string& text) {
    return scenario_to_json(scenario_from_json(nlohmann::json::parse(text))).dump();
  });
  m.def("run_json", &run_config, py::arg("config"), py::arg("out_dir") = "");
  m.def("patch_test", &patch_test, py::arg("h_top") = 0.25, py::arg("ratio") = 3.0, py::arg("gamma0_factor") = 20.0);
  m.def("convergence", &convergence, py::arg("mode") = "hybrid", py::arg("alpha") = 0.0, py::arg("beta") = 0.0,
        py::arg("levels") = std::vector<int>{4, 8, 16, 32});
  m.def("hermite_bending_stiffness", [](double EI, double L) { return Eigen::Matrix4d(hermite_bending_stiffness(EI, L)); });
  m.def("truss_stiffness", [](double EA, double L) { return Eigen::Matrix2d(truss_stiffness(EA, L)); });
}
