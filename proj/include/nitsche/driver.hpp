#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nitsche/scenario.hpp"
#include "nitsche/system.hpp"

namespace nitsche {

struct RunResult {
  Problem problem;
  GlobalSystem system;
  Solution solution;
  PostProcessed post;
  /// Displacement of the probe interface node, if it exists.
  std::optional<Vec2> probe;
};

/// Builds, assembles, solves and post-processes a scenario.
RunResult run_scenario(const Scenario& scenario);

/// Machine-readable summary: DOF counts, iterations, energy, probe displacement.
nlohmann::json run_summary(const Scenario& scenario, const RunResult& result);

/// Writes the formats selected in scenario.output into `directory`, file
/// names prefixed with scenario.name + suffix. Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const Scenario& scenario, const RunResult& result,
                                                 const std::filesystem::path& directory, const std::string& suffix = "");

}  // namespace nitsche
