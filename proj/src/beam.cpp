#include "nitsche/beam.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nitsche/errors.hpp"
#include "nitsche/quadrature.hpp"

namespace nitsche {

namespace {

void require_length(double L) {
  if (!(L > 0.0)) {
    std::ostringstream os;
    os << "beam element length must be positive, got " << L;
    throw InputError(os.str());
  }
}

}  // namespace

Eigen::Vector4d hermite_values(double xi, double L) {
  const double x2 = xi * xi;
  const double x3 = x2 * xi;
  return {1.0 - 3.0 * x2 + 2.0 * x3, L * (xi - 2.0 * x2 + x3), 3.0 * x2 - 2.0 * x3, L * (x3 - x2)};
}

Eigen::Vector4d hermite_slopes(double xi, double L) {
  const double x2 = xi * xi;
  return {6.0 * (x2 - xi) / L, 1.0 - 4.0 * xi + 3.0 * x2, 6.0 * (xi - x2) / L, 3.0 * x2 - 2.0 * xi};
}

Eigen::Vector4d hermite_curvatures(double xi, double L) {
  return {(12.0 * xi - 6.0) / (L * L), (6.0 * xi - 4.0) / L, (6.0 - 12.0 * xi) / (L * L), (6.0 * xi - 2.0) / L};
}

Mat4 hermite_bending_stiffness(double EI, double L) {
  require_length(L);
  if (EI < 0.0) throw InputError("EI must be non-negative");
  const double L2 = L * L;
  Mat4 k;
  k << 12.0, 6.0 * L, -12.0, 6.0 * L,     //
      6.0 * L, 4.0 * L2, -6.0 * L, 2.0 * L2,  //
      -12.0, -6.0 * L, 12.0, -6.0 * L,    //
      6.0 * L, 2.0 * L2, -6.0 * L, 4.0 * L2;
  return (EI / (L2 * L)) * k;
}

Eigen::Matrix2d truss_stiffness(double EA, double L) {
  require_length(L);
  if (EA < 0.0) throw InputError("EA must be non-negative");
  Eigen::Matrix2d k;
  k << 1.0, -1.0, -1.0, 1.0;
  return (EA / L) * k;
}

Eigen::Matrix3d local_to_cartesian(const Vec2& n, const Vec2& t) {
  constexpr double tol = 1e-12;
  if (std::abs(n.norm() - 1.0) > tol || std::abs(t.norm() - 1.0) > tol || std::abs(n.dot(t)) > tol) {
    throw InputError("local_to_cartesian: (n, t) is not orthonormal");
  }
  Eigen::Matrix3d r;
  r << n.x(), t.x(), 0.0,  //
      n.y(), t.y(), 0.0,   //
      0.0, 0.0, 1.0;
  return r;
}

Eigen::Matrix<double, 6, 6> element_local_map(const Vec2& n, const Vec2& t) {
  // Each node: (u_n, u_t, theta) = R^T (u_x, u_y, theta).
  const Eigen::Matrix3d rt = local_to_cartesian(n, t).transpose();
  Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
  for (int node = 0; node < 2; ++node) {
    const int c = 3 * node;
    m.block<1, 3>(2 * node, c) = rt.row(0);      // u_n
    m.block<1, 3>(2 * node + 1, c) = rt.row(2);  // theta
    m.block<1, 3>(4 + node, c) = rt.row(1);      // u_t
  }
  return m;
}

Eigen::Matrix<double, 2, 6> interface_basis(const Vec2& n, const Vec2& t, double xi, double L) {
  const Eigen::Vector4d h = hermite_values(xi, L);
  Eigen::Matrix<double, 1, 6> un;  // u_n in terms of local DOFs
  un << h[0], h[1], h[2], h[3], 0.0, 0.0;
  Eigen::Matrix<double, 1, 6> ut;
  ut << 0.0, 0.0, 0.0, 0.0, 1.0 - xi, xi;
  const auto map = element_local_map(n, t);
  return n * (un * map) + t * (ut * map);
}

InterfaceValue evaluate_interface_field(const InterfaceSegment& segment, const BeamElement& element,
                                        double s_local, const Vec6& cartesian_dofs) {
  const double L = element.length();
  require_length(L);
  const double tol = 1e-12 * L;
  if (s_local < -tol || s_local > L + tol) {
    std::ostringstream os;
    os << "evaluate_interface_field: s = " << s_local << " outside element of length " << L;
    throw InputError(os.str());
  }
  const double xi = std::clamp(s_local / L, 0.0, 1.0);
  const Vec6 local = element_local_map(segment.normal, segment.tangent) * cartesian_dofs;
  InterfaceValue v;
  v.u_n = hermite_values(xi, L).dot(local.head<4>());
  v.theta = hermite_slopes(xi, L).dot(local.head<4>());
  v.u_t = (1.0 - xi) * local[4] + xi * local[5];
  v.u = v.u_n * segment.normal + v.u_t * segment.tangent;
  return v;
}

Mat6 beam_element_stiffness(const InterfaceSegment& segment, const BeamElement& element,
                            const SectionProperties& section) {
  const double L = element.length();
  Mat6 local = Mat6::Zero();
  local.topLeftCorner<4, 4>() = hermite_bending_stiffness(section.EI, L);
  local.bottomRightCorner<2, 2>() = truss_stiffness(section.EA, L);
  const auto map = element_local_map(segment.normal, segment.tangent);
  return map.transpose() * local * map;
}

Vec6 interface_load_vector(const InterfaceSegment& segment, const BeamElement& element,
                           const std::function<double(double)>& f_n, const std::function<double(double)>& f_t) {
  const double L = element.length();
  require_length(L);
  Vec6 local = Vec6::Zero();
  for (const auto& q : gauss4()) {
    const double s = element.s_begin + q.x * L;
    const double w = q.w * L;
    if (f_n) local.head<4>() += w * f_n(s) * hermite_values(q.x, L);
    if (f_t) {
      const double ft = f_t(s);
      local[4] += w * ft * (1.0 - q.x);
      local[5] += w * ft * q.x;
    }
  }
  return element_local_map(segment.normal, segment.tangent).transpose() * local;
}

}  // namespace nitsche
