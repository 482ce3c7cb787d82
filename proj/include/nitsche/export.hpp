#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nitsche/system.hpp"

namespace nitsche {

/// Column names of the interface profile file, in order.
inline constexpr const char* kProfileHeader = "segment,s,u_n,u_t,theta,jump_n_1,jump_n_2,sigma_n_1,sigma_n_2";

struct ProfileRow {
  int segment = -1;
  double s = 0.0;
  double u_n = 0.0;
  double u_t = 0.0;
  double theta = 0.0;
  double jump_n_1 = 0.0;
  double jump_n_2 = 0.0;
  double sigma_n_1 = 0.0;
  double sigma_n_2 = 0.0;

  friend bool operator==(const ProfileRow&, const ProfileRow&) = default;
};

std::vector<ProfileRow> profile_rows(const PostProcessed& post);

/// Values are written with 17 significant digits so read_profile_csv restores them exactly.
void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows);
void write_profile_csv(const std::filesystem::path& path, const std::vector<ProfileRow>& rows);
std::vector<ProfileRow> read_profile_csv(std::istream& in);
std::vector<ProfileRow> read_profile_csv(const std::filesystem::path& path);

/// Legacy ASCII unstructured grid: all subdomain meshes, point data
/// "displacement" (vectors) and cell data "stress" (tensors, zz row zero).
/// `deformed` selects deformed or reference point coordinates.
void write_vtk(std::ostream& out, const Problem& problem, const PostProcessed& post, bool deformed = false);
void write_vtk(const std::filesystem::path& path, const Problem& problem, const PostProcessed& post,
               bool deformed = false);

/// Undeformed mesh (light), deformed mesh (dark) and deformed interface curves.
void write_svg(std::ostream& out, const Problem& problem, const DofMap& dofs, const Solution& solution,
               const PostProcessed& post, double scale);
void write_svg(const std::filesystem::path& path, const Problem& problem, const DofMap& dofs,
               const Solution& solution, const PostProcessed& post, double scale);

}  // namespace nitsche
