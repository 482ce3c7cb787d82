#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nitsche/system.hpp"

namespace nitsche {

struct PatchTestOptions {
  double h_top = 0.25;     ///< mesh size of (0,1)x(1/2,1)
  double h_bottom = 0.25 / 3.0;  ///< mesh size of (0,1)x(0,1/2)
  double gamma0_factor = 20.0;
  double tolerance = 1e-9;
};

struct PatchTestReport {
  bool solved = false;
  bool passed = false;
  double max_error = 0.0;  ///< max nodal error / max nodal exact value
  double max_jump = 0.0;   ///< largest |u_i - u_Gamma| at coupling points
  int dofs = 0;
  std::string diagnostic;  ///< solver message when the solve failed
};

/// Exact linear field of the patch test.
Vec2 patch_field(const Vec2& x);

/// Two-rectangle problem split at y = 1/2 in StrongStiffness mode with
/// EI = EA = 0, Dirichlet data from patch_field on the outer boundary and at
/// the interface endpoints.
Problem make_patch_problem(const PatchTestOptions& options);
PatchTestReport run_patch_test(const PatchTestOptions& options = {});

/// Manufactured solution on the unit square split at y = 1/2. The lower half
/// carries u = (sin(pi x) sin(pi y), x^2 y (1 - y)); the upper half carries u + d,
/// where d vanishes for alpha = beta = 0 and otherwise realizes the cohesive
/// jump with continuous traction.
struct Manufactured {
  Material material;
  double alpha = 0.0;
  double beta = 0.0;

  [[nodiscard]] Vec2 lower(const Vec2& x) const;
  [[nodiscard]] Vec2 upper(const Vec2& x) const;
  /// Displacement gradient [du_x/dx, du_x/dy; du_y/dx, du_y/dy].
  [[nodiscard]] Eigen::Matrix2d lower_gradient(const Vec2& x) const;
  [[nodiscard]] Eigen::Matrix2d upper_gradient(const Vec2& x) const;
  [[nodiscard]] Vec2 lower_force(const Vec2& x) const;
  [[nodiscard]] Vec2 upper_force(const Vec2& x) const;
  /// Interface displacement at (x, 1/2).
  [[nodiscard]] Vec2 interface_value(double x) const;
};

struct ConvergenceOptions {
  CouplingMode mode = CouplingMode::Hybrid;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<int> levels{4, 8, 16, 32};  ///< upper mesh has h = 1/N, lower mesh 2/(3N)
  double youngs_modulus = 1.0;
  double poisson_ratio = 1.0 / 3.0;
  double gamma0_factor = 20.0;
};

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  int dofs = 0;
  double l2_error = 0.0;
  double energy_error = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::optional<double> l2_slope;
  std::optional<double> energy_slope;
  std::vector<std::string> warnings;
};

Problem make_manufactured_problem(const ConvergenceOptions& options, int n);
ConvergenceReport run_convergence(const ConvergenceOptions& options);

/// Least-squares slope of log(y) against log(x); requires at least two points.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nitsche
