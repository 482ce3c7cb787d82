#pragma once

#include <Eigen/Core>
#include <functional>

#include "nitsche/elasticity.hpp"
#include "nitsche/geometry.hpp"
#include "nitsche/interface.hpp"

namespace nitsche {

using Mat4 = Eigen::Matrix4d;

struct SectionProperties {
  double EI = 0.0;
  double EA = 0.0;
};

/// Cubic Hermite shape functions on an element of length L at xi = s/L in [0, 1],
/// ordered (u_n1, theta1, u_n2, theta2).
Eigen::Vector4d hermite_values(double xi, double L);
/// d/ds of the above.
Eigen::Vector4d hermite_slopes(double xi, double L);
/// d^2/ds^2 of the above.
Eigen::Vector4d hermite_curvatures(double xi, double L);

/// Exact Galerkin matrix of EI (u_n'')^2 over (u_n1, theta1, u_n2, theta2).
Mat4 hermite_bending_stiffness(double EI, double L);

/// (EA / L) [[1, -1], [-1, 1]] over (u_t1, u_t2).
Eigen::Matrix2d truss_stiffness(double EA, double L);

/// [[n_x, t_x, 0], [n_y, t_y, 0], [0, 0, 1]]: (u_n, u_t, theta) -> (u_x, u_y, theta).
/// Throws InputError if (n, t) is not orthonormal.
Eigen::Matrix3d local_to_cartesian(const Vec2& n, const Vec2& t);

/// Local element DOFs from the 6 Cartesian ones (u_x1, u_y1, theta1, u_x2, u_y2, theta2):
/// rows (u_n1, theta1, u_n2, theta2, u_t1, u_t2).
Eigen::Matrix<double, 6, 6> element_local_map(const Vec2& n, const Vec2& t);

/// Interface displacement u_Gamma = u_n n + u_t t at xi as a linear map of
/// the element's Cartesian DOFs.
Eigen::Matrix<double, 2, 6> interface_basis(const Vec2& n, const Vec2& t, double xi, double L);

struct InterfaceValue {
  Vec2 u;
  double u_n = 0.0;
  double u_t = 0.0;
  double theta = 0.0;  ///< du_n/ds
};

/// Evaluates the interface field at s_local in [0, L] of `element` of `segment`.
/// Throws InputError if s_local lies outside the element.
InterfaceValue evaluate_interface_field(const InterfaceSegment& segment, const BeamElement& element,
                                        double s_local, const Vec6& cartesian_dofs);

/// Bending plus truss stiffness of one element over its Cartesian DOFs.
Mat6 beam_element_stiffness(const InterfaceSegment& segment, const BeamElement& element,
                            const SectionProperties& section);

/// Consistent load of f_n(s), f_t(s) (s = segment arclength) by 4-point Gauss,
/// over the element's Cartesian DOFs.
Vec6 interface_load_vector(const InterfaceSegment& segment, const BeamElement& element,
                           const std::function<double(double)>& f_n, const std::function<double(double)>& f_t);

}  // namespace nitsche
