#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nitsche/system.hpp"

namespace nitsche {

struct PointDef {
  std::string label;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PointDef&, const PointDef&) = default;
};

struct SubdomainDef {
  int id = 0;
  std::vector<std::array<double, 2>> vertices;

  friend bool operator==(const SubdomainDef&, const SubdomainDef&) = default;
};

struct SegmentDef {
  std::string from;
  std::string to;
  int plus_side = -1;
  int minus_side = -1;

  friend bool operator==(const SegmentDef&, const SegmentDef&) = default;
};

struct GeometryDef {
  /// "cantilever" or empty for an explicit geometry.
  std::string builtin;
  std::vector<PointDef> points;
  std::vector<SubdomainDef> subdomains;
  std::vector<SegmentDef> segments;

  friend bool operator==(const GeometryDef&, const GeometryDef&) = default;
};

struct MaterialDef {
  double E = 1e6;
  double nu = 1.0 / 3.0;

  friend bool operator==(const MaterialDef&, const MaterialDef&) = default;
};

struct SectionDef {
  double EI = 0.0;
  double EA = 0.0;

  friend bool operator==(const SectionDef&, const SectionDef&) = default;
};

struct CouplingDef {
  std::string mode = "hybrid";
  double gamma0_factor = 20.0;
  std::optional<double> gamma0;
  double alpha = 0.0;
  double beta = 0.0;

  friend bool operator==(const CouplingDef&, const CouplingDef&) = default;
};

struct InterfaceLoadDef {
  double f_n = 0.0;
  double f_t = 0.0;

  friend bool operator==(const InterfaceLoadDef&, const InterfaceLoadDef&) = default;
};

struct LoadsDef {
  std::array<double, 2> body_force{0.0, 0.0};
  std::map<int, std::array<double, 2>> subdomain_body_forces;
  InterfaceLoadDef interface;
  std::map<int, InterfaceLoadDef> segment_loads;

  friend bool operator==(const LoadsDef&, const LoadsDef&) = default;
};

struct EdgeRef {
  int subdomain = 0;
  int edge = 0;  ///< polygon edge k joins vertices k and k+1

  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

struct BoundaryDef {
  std::vector<EdgeRef> clamped;
  std::vector<std::string> interface_clamps;
  /// "auto" (theta clamped iff an incident segment has EI > 0), "always", "never".
  std::string clamp_rotation = "auto";

  friend bool operator==(const BoundaryDef&, const BoundaryDef&) = default;
};

struct MeshDef {
  double target_h = 0.1;
  std::map<int, double> subdomain_h;
  /// Beam element size; unset means the mean of the two adjacent target_h,
  /// 0 means one element per segment.
  std::optional<double> interface_element_size;
  std::string cache;

  friend bool operator==(const MeshDef&, const MeshDef&) = default;
};

struct OutputDef {
  std::string directory = "out";
  std::vector<std::string> formats{"vtk", "svg", "csv"};
  double scale = 1.0;
  std::string probe = "F";

  friend bool operator==(const OutputDef&, const OutputDef&) = default;
};

struct Scenario {
  std::string name = "scenario";
  GeometryDef geometry;
  MaterialDef material;
  std::map<int, MaterialDef> subdomain_materials;
  SectionDef section;
  std::map<int, SectionDef> segment_sections;
  CouplingDef coupling;
  LoadsDef loads;
  BoundaryDef boundary;
  MeshDef mesh;
  OutputDef output;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline constexpr int kConfigVersion = 1;

/// Parses and validates a config document. Unknown keys, wrong types and
/// out-of-range values raise ConfigError naming the offending field.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Reads a JSON file (IoError if unreadable, ConfigError with line/column if malformed).
nlohmann::json read_config_file(const std::filesystem::path& path);

/// Applies "a.b.c=value" to the document; value is parsed as JSON when
/// possible, otherwise taken as a string. Missing intermediate objects are created.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Names accepted by builtin_scenario.
std::vector<std::string> builtin_scenario_names();
/// "cantilever-bend" or "cantilever-stretch"; ConfigError for anything else.
Scenario builtin_scenario(const std::string& name);

/// Expanded geometry (builtins replaced by explicit points/subdomains/segments).
GeometryDef resolve_geometry(const GeometryDef& geometry);
GeometryDef cantilever_geometry();

/// Meshes, interface, cut partition, materials, loads and constraints.
Problem build_problem(const Scenario& scenario);

}  // namespace nitsche
