#include "nitsche/elasticity.hpp"

#include <cmath>
#include <sstream>

#include "nitsche/errors.hpp"

namespace nitsche {

std::pair<double, double> lame_from_engineering(double youngs_modulus, double poisson_ratio) {
  if (!(youngs_modulus > 0.0) || !std::isfinite(youngs_modulus)) {
    throw InputError("Young's modulus must be positive and finite");
  }
  if (!(poisson_ratio > -1.0 && poisson_ratio < 0.5)) {
    std::ostringstream os;
    os << "Poisson ratio " << poisson_ratio << " outside (-1, 1/2)";
    throw InputError(os.str());
  }
  const double lambda = youngs_modulus * poisson_ratio / (1.0 - poisson_ratio * poisson_ratio);
  const double mu = youngs_modulus / (2.0 * (1.0 + poisson_ratio));
  return {lambda, mu};
}

Material Material::from_engineering(double youngs_modulus, double poisson_ratio) {
  const auto [lambda, mu] = lame_from_engineering(youngs_modulus, poisson_ratio);
  return {youngs_modulus, poisson_ratio, lambda, mu};
}

Material Material::from_lame(double lambda, double mu) {
  if (!(mu > 0.0)) throw InputError("shear modulus must be positive");
  // Invert the plane stress relations: nu = lambda / (lambda + 2 mu).
  const double nu = lambda / (lambda + 2.0 * mu);
  return {2.0 * mu * (1.0 + nu), nu, lambda, mu};
}

Eigen::Matrix<double, 3, 6> strain_matrix(const Triangle& tri) {
  const double area2 = orient(tri[0], tri[1], tri[2]);
  const double scale = triangle_diameter(tri);
  if (!(area2 > 1e-14 * scale * scale)) throw GeometryError("triangle with non-positive area");
  Eigen::Matrix<double, 3, 6> b = Eigen::Matrix<double, 3, 6>::Zero();
  for (int i = 0; i < 3; ++i) {
    const Vec2& pj = tri[(i + 1) % 3];
    const Vec2& pk = tri[(i + 2) % 3];
    // Gradient of the barycentric coordinate of vertex i.
    const double dx = (pj.y() - pk.y()) / area2;
    const double dy = (pk.x() - pj.x()) / area2;
    b(0, 2 * i) = dx;
    b(1, 2 * i + 1) = dy;
    b(2, 2 * i) = dy;
    b(2, 2 * i + 1) = dx;
  }
  return b;
}

Eigen::Matrix3d constitutive_matrix(const Material& m) {
  Eigen::Matrix3d d;
  d << m.lambda + 2.0 * m.mu, m.lambda, 0.0,  //
      m.lambda, m.lambda + 2.0 * m.mu, 0.0,   //
      0.0, 0.0, m.mu;
  return d;
}

Mat6 p1_stiffness(const Triangle& tri, const Material& material) {
  const auto b = strain_matrix(tri);
  return signed_area(tri) * b.transpose() * constitutive_matrix(material) * b;
}

Vec6 body_load_vector(const Triangle& tri, const Vec2& f) {
  const double area = signed_area(tri);
  if (!(area > 0.0)) throw GeometryError("triangle with non-positive area");
  Vec6 out;
  for (int i = 0; i < 3; ++i) out.segment<2>(2 * i) = area * f / 3.0;
  return out;
}

Stress2 element_stress(const Triangle& tri, const Vec6& u, const Material& material) {
  const Eigen::Vector3d s = constitutive_matrix(material) * (strain_matrix(tri) * u);
  return {s[0], s[1], s[2]};
}

Eigen::Matrix<double, 2, 6> traction_matrix(const Triangle& tri, const Material& material, const Vec2& n) {
  Eigen::Matrix<double, 2, 3> proj;
  proj << n.x(), 0.0, n.y(),  //
      0.0, n.y(), n.x();
  return proj * constitutive_matrix(material) * strain_matrix(tri);
}

Eigen::Matrix<double, 2, 6> p1_values(const Triangle& tri, const Vec2& p) {
  const Eigen::Vector3d l = barycentric(tri, p);
  Eigen::Matrix<double, 2, 6> n = Eigen::Matrix<double, 2, 6>::Zero();
  for (int i = 0; i < 3; ++i) {
    n(0, 2 * i) = l[i];
    n(1, 2 * i + 1) = l[i];
  }
  return n;
}

}  // namespace nitsche
