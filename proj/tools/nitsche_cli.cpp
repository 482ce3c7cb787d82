// Command-line front end: solve scenarios, run the patch test and the
// convergence study, export results.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "nitsche/driver.hpp"
#include "nitsche/errors.hpp"
#include "nitsche/studies.hpp"

namespace {

using namespace nitsche;

enum Exit { kOk = 0, kFailed = 1, kConfig = 2, kSolver = 3, kIo = 4 };

struct ScenarioArgs {
  std::string config;
  std::string scenario;
  std::vector<std::string> overrides;
  std::string out;
  std::optional<double> scale;
  std::string sweep;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& a) {
  cmd->add_option("--config", a.config, "scenario JSON file");
  cmd->add_option("--scenario", a.scenario, "built-in scenario (cantilever-bend, cantilever-stretch)");
  cmd->add_option("--set", a.overrides, "override a config field, e.g. --set section.EI=1e4")->take_all();
  cmd->add_option("--out", a.out, "output directory (overrides output.directory)");
  cmd->add_option("--scale", a.scale, "deformation scale for exports");
  cmd->add_option("--sweep", a.sweep, "run once per value: key=v1,v2,...");
}

nlohmann::json load_document(const ScenarioArgs& a) {
  if (a.config.empty() == a.scenario.empty()) throw ConfigError("exactly one of --config or --scenario is required");
  nlohmann::json doc = a.config.empty() ? scenario_to_json(builtin_scenario(a.scenario)) : read_config_file(a.config);
  for (const auto& o : a.overrides) apply_override(doc, o);
  if (!a.out.empty()) apply_override(doc, "output.directory=\"" + a.out + "\"");
  if (a.scale) {
    std::ostringstream os;
    os.precision(17);
    os << "output.scale=" << *a.scale;
    apply_override(doc, os.str());
  }
  return doc;
}

std::string suffix_for(const std::string& key, const std::string& value) {
  const auto dot = key.rfind('.');
  std::string s = "_" + (dot == std::string::npos ? key : key.substr(dot + 1)) + "_" + value;
  for (char& c : s) {
    if (c == '/' || c == '"' || c == ' ') c = '-';
  }
  return s;
}

int run_solve(const ScenarioArgs& a, const std::vector<std::string>& formats_filter) {
  const nlohmann::json base = load_document(a);
  std::vector<std::pair<std::string, nlohmann::json>> runs;
  if (a.sweep.empty()) {
    runs.emplace_back("", base);
  } else {
    const auto eq = a.sweep.find('=');
    if (eq == std::string::npos) throw ConfigError("--sweep expects key=v1,v2,...");
    const std::string key = a.sweep.substr(0, eq);
    std::stringstream values(a.sweep.substr(eq + 1));
    std::string v;
    while (std::getline(values, v, ',')) {
      nlohmann::json doc = base;
      apply_override(doc, key + "=" + v);
      runs.emplace_back(suffix_for(key, v), doc);
    }
    if (runs.empty()) throw ConfigError("--sweep has no values");
  }

  // Validate every configuration before solving anything.
  std::vector<Scenario> scenarios;
  for (const auto& [suffix, doc] : runs) {
    Scenario sc = scenario_from_json(doc);
    if (!formats_filter.empty()) sc.output.formats = formats_filter;
    scenarios.push_back(sc);
  }
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const Scenario& sc = scenarios[k];
    const RunResult r = run_scenario(sc);
    const auto files = write_outputs(sc, r, sc.output.directory, runs[k].first);
    std::cout << run_summary(sc, r).dump(2) << '\n';
    for (const auto& f : files) std::cerr << "wrote " << f.string() << '\n';
  }
  return kOk;
}

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("--levels: '" + item + "' is not an integer");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybridized Nitsche interface coupling solver"};
  app.require_subcommand(1);

  ScenarioArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "solve a scenario and write exports plus a summary");
  add_scenario_options(solve_cmd, solve_args);

  ScenarioArgs export_args;
  std::vector<std::string> export_formats;
  auto* export_cmd = app.add_subcommand("export", "solve a scenario and write only the chosen formats");
  add_scenario_options(export_cmd, export_args);
  export_cmd->add_option("--format", export_formats, "vtk, svg or csv (repeatable)")
      ->required()
      ->check(CLI::IsMember({"vtk", "svg", "csv"}));

  PatchTestOptions patch;
  double ratio = 3.0;
  auto* patch_cmd = app.add_subcommand("patch-test", "two-rectangle patch test on non-matching meshes");
  patch_cmd->add_option("--h-top", patch.h_top, "mesh size of the upper rectangle");
  patch_cmd->add_option("--ratio", ratio, "upper/lower mesh size ratio (1 gives matching sizes)");
  patch_cmd->add_option("--gamma0-factor", patch.gamma0_factor, "gamma0 = factor * (lambda + mu)");

  ConvergenceOptions conv;
  std::string mode = "hybrid";
  std::string levels = "4,8,16,32";
  auto* conv_cmd = app.add_subcommand("convergence", "manufactured-solution convergence study");
  conv_cmd->add_option("--mode", mode, "hybrid, strong or cohesive");
  conv_cmd->add_option("--alpha", conv.alpha, "normal compliance");
  conv_cmd->add_option("--beta", conv.beta, "tangential compliance");
  conv_cmd->add_option("--levels", levels, "comma-separated N (upper mesh h = 1/N)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return run_solve(solve_args, {});
    if (*export_cmd) return run_solve(export_args, export_formats);
    if (*patch_cmd) {
      if (!(ratio > 0.0)) throw ConfigError("--ratio must be positive");
      patch.h_bottom = patch.h_top / ratio;
      const auto rep = run_patch_test(patch);
      if (!rep.solved) {
        std::cout << "patch-test: solve failed: " << rep.diagnostic << '\n';
        return kSolver;
      }
      std::printf("patch-test: dofs %d, max nodal error %.3e (relative), max interface jump %.3e: %s\n", rep.dofs,
                  rep.max_error, rep.max_jump, rep.passed ? "pass" : "FAIL");
      return rep.passed ? kOk : kFailed;
    }
    if (*conv_cmd) {
      conv.mode = parse_mode(mode);
      if (conv.mode == CouplingMode::Contact) throw ConfigError("--mode contact is not a linear study");
      conv.levels = parse_levels(levels);
      const auto rep = run_convergence(conv);
      std::printf("%6s %10s %8s %14s %14s %8s %8s\n", "N", "h", "dofs", "L2 error", "energy error", "L2 rate",
                  "E rate");
      for (std::size_t k = 0; k < rep.rows.size(); ++k) {
        const auto& r = rep.rows[k];
        std::printf("%6d %10.5f %8d %14.6e %14.6e", r.n, r.h, r.dofs, r.l2_error, r.energy_error);
        if (k > 0) {
          const auto& p = rep.rows[k - 1];
          std::printf(" %8.3f %8.3f", std::log(p.l2_error / r.l2_error) / std::log(p.h / r.h),
                      std::log(p.energy_error / r.energy_error) / std::log(p.h / r.h));
        }
        std::printf("\n");
      }
      if (rep.l2_slope) std::printf("least-squares slopes: L2 %.4f, energy %.4f\n", *rep.l2_slope, *rep.energy_slope);
      for (const auto& w : rep.warnings) std::printf("warning: %s\n", w.c_str());
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << '\n';
    return kConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
