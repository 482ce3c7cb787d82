#include "nitsche/driver.hpp"

#include <fstream>

#include "nitsche/errors.hpp"
#include "nitsche/export.hpp"

namespace nitsche {

RunResult run_scenario(const Scenario& scenario) {
  RunResult r;
  r.problem = build_problem(scenario);
  r.system = assemble(r.problem);
  r.solution = solve(r.problem, r.system);
  r.post = postprocess(r.problem, r.system, r.solution, scenario.output.scale);
  const int node = r.problem.interface.find_node(scenario.output.probe);
  if (node >= 0) {
    r.probe = Vec2(r.solution.values[r.system.dofs.interface(node, 0)],
                   r.solution.values[r.system.dofs.interface(node, 1)]);
  }
  return r;
}

nlohmann::json run_summary(const Scenario& scenario, const RunResult& r) {
  using nlohmann::json;
  const auto& d = r.system.dofs;
  int triangles = 0;
  for (const auto& m : r.problem.meshes) triangles += static_cast<int>(m.triangles.size());
  json s;
  s["scenario"] = scenario.name;
  s["mode"] = mode_name(r.problem.coupling.mode);
  s["dofs"] = {{"total", d.size},
               {"bulk", d.interface_offset},
               {"interface", d.size - d.interface_offset},
               {"constrained", r.problem.constraints.size()}};
  s["triangles"] = triangles;
  s["interface_elements"] = r.problem.interface.element_count();
  s["newton_iterations"] = r.solution.diagnostics.newton_iterations;
  s["residual_history"] = r.solution.diagnostics.residual_history;
  s["active_history"] = r.solution.diagnostics.active_history;
  s["energy"] = strain_energy(r.system, r.solution.values);
  s["work"] = r.system.rhs.dot(r.solution.values);
  if (r.probe) {
    s["probe"] = {{"label", scenario.output.probe}, {"displacement", {r.probe->x(), r.probe->y()}}};
  }
  return s;
}

std::vector<std::filesystem::path> write_outputs(const Scenario& scenario, const RunResult& r,
                                                 const std::filesystem::path& directory, const std::string& suffix) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create output directory " + directory.string() + ": " + ec.message());
  const std::string stem = scenario.name + suffix;
  std::vector<std::filesystem::path> written;
  for (const auto& f : scenario.output.formats) {
    if (f == "vtk") {
      written.push_back(directory / (stem + ".vtk"));
      write_vtk(written.back(), r.problem, r.post);
    } else if (f == "svg") {
      written.push_back(directory / (stem + ".svg"));
      write_svg(written.back(), r.problem, r.system.dofs, r.solution, r.post, scenario.output.scale);
    } else if (f == "csv") {
      written.push_back(directory / (stem + "_profile.csv"));
      write_profile_csv(written.back(), profile_rows(r.post));
    }
  }
  written.push_back(directory / (stem + "_summary.json"));
  std::ofstream out(written.back());
  if (!out) throw IoError("cannot open " + written.back().string() + " for writing");
  out << run_summary(scenario, r).dump(2) << '\n';
  if (!out) throw IoError("failed writing " + written.back().string());
  return written;
}

}  // namespace nitsche
