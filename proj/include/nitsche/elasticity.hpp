#pragma once

#include <Eigen/Core>
#include <utility>

#include "nitsche/geometry.hpp"

namespace nitsche {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Plane stress Lame parameters: lambda = E nu / (1 - nu^2), mu = E / (2 (1 + nu)).
/// Requires E > 0 and -1 < nu < 1/2; throws InputError otherwise.
std::pair<double, double> lame_from_engineering(double youngs_modulus, double poisson_ratio);

struct Material {
  double youngs_modulus = 1.0;
  double poisson_ratio = 0.0;
  double lambda = 0.0;
  double mu = 0.5;

  static Material from_engineering(double youngs_modulus, double poisson_ratio);
  /// Material given directly by its Lame parameters (E and nu are back-computed).
  static Material from_lame(double lambda, double mu);
};

/// Symmetric 2x2 stress tensor.
struct Stress2 {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;

  [[nodiscard]] Vec2 traction(const Vec2& n) const { return {xx * n.x() + xy * n.y(), xy * n.x() + yy * n.y()}; }
  /// n . sigma . n
  [[nodiscard]] double normal(const Vec2& n) const { return n.dot(traction(n)); }
  /// t . sigma . n
  [[nodiscard]] double shear(const Vec2& n, const Vec2& t) const { return t.dot(traction(n)); }
};

/// Strain-displacement matrix of the P1 triangle, rows (e_xx, e_yy, 2 e_xy),
/// columns (u_x0, u_y0, u_x1, u_y1, u_x2, u_y2). Throws GeometryError for
/// non-positive area.
Eigen::Matrix<double, 3, 6> strain_matrix(const Triangle& tri);

/// Plane stress constitutive matrix in the same Voigt ordering.
Eigen::Matrix3d constitutive_matrix(const Material& material);

/// Exact constant-strain triangle stiffness.
Mat6 p1_stiffness(const Triangle& tri, const Material& material);

/// Consistent load of a constant body force: area * f / 3 per node.
Vec6 body_load_vector(const Triangle& tri, const Vec2& f);

Stress2 element_stress(const Triangle& tri, const Vec6& nodal_displacements, const Material& material);

/// sigma . n
inline Vec2 edge_traction(const Stress2& stress, const Vec2& n) { return stress.traction(n); }

/// Linear map from the element displacements to the (constant) traction sigma(u) . n.
Eigen::Matrix<double, 2, 6> traction_matrix(const Triangle& tri, const Material& material, const Vec2& n);

/// P1 trace at p: rows (u_x, u_y), columns as in strain_matrix.
Eigen::Matrix<double, 2, 6> p1_values(const Triangle& tri, const Vec2& p);

}  // namespace nitsche
