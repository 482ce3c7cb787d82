#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <random>

#include "nitsche/beam.hpp"
#include "nitsche/coupling.hpp"
#include "nitsche/elasticity.hpp"
#include "nitsche/interface.hpp"
#include "nitsche/mesh.hpp"
#include "nitsche/scenario.hpp"
#include "nitsche/system.hpp"

namespace fixtures {

using namespace nitsche;

inline double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  if (scale == 0.0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

inline Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

// 5-point Gauss-Legendre on [0, 1], exact through degree 9. Kept separate
// from the library's 4-point rule so oracles do not share its quadrature.
inline std::array<std::pair<double, double>, 5> gauss5() {
  const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
  const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
  const double w0 = 128.0 / 225.0;
  const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
  const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
  return {{{0.5 * (1 - b), 0.5 * wb},
           {0.5 * (1 - a), 0.5 * wa},
           {0.5, 0.5 * w0},
           {0.5 * (1 + a), 0.5 * wa},
           {0.5 * (1 + b), 0.5 * wb}}};
}

// Hermite cubics written out directly.
inline Eigen::Vector4d hermite(double xi, double L) {
  return {1 - 3 * xi * xi + 2 * xi * xi * xi, L * (xi - 2 * xi * xi + xi * xi * xi), 3 * xi * xi - 2 * xi * xi * xi,
          L * (xi * xi * xi - xi * xi)};
}
inline Eigen::Vector4d hermite_dd(double xi, double L) {
  return {(-6 + 12 * xi) / (L * L), (-4 + 6 * xi) / L, (6 - 12 * xi) / (L * L), (6 * xi - 2) / L};
}

/// One straight interface segment of length 1 (rotated by `angle` about the
/// origin) with two beam elements [0, 0.8] and [0.8, 1], and one triangle on
/// its minus side whose edge covers s in [0, 0.6].
struct SideFixture {
  InterfaceSegment segment;
  Triangle triangle;
  Material material = Material::from_engineering(1e6, 1.0 / 3.0);
  double s_begin = 0.1;
  double s_end = 0.5;
  int element = 0;

  explicit SideFixture(double angle = 0.0) {
    const Vec2 t(std::cos(angle), std::sin(angle));
    segment.start = Vec2(0.0, 0.0);
    segment.end = t;
    segment.tangent = t;
    segment.normal = Vec2(-t.y(), t.x());
    segment.length = 1.0;
    segment.start_node = 0;
    segment.end_node = 2;
    segment.plus_side = 2;
    segment.minus_side = 1;
    segment.elements = {{0, 1, 0.0, 0.8}, {1, 2, 0.8, 1.0}};
    const Vec2 n = segment.normal;
    triangle = {segment.point_at(0.0), segment.point_at(0.3) - 0.5 * n, segment.point_at(0.6)};
  }

  [[nodiscard]] Vec2 outward() const { return segment.normal; }
  [[nodiscard]] SideTrace trace() const {
    return make_side_trace(segment, segment.elements[element], s_begin, s_end, triangle, material, outward());
  }
  [[nodiscard]] double h() const {
    return std::max({(triangle[0] - triangle[1]).norm(), (triangle[1] - triangle[2]).norm(),
                     (triangle[2] - triangle[0]).norm()});
  }

  // Independent pointwise evaluation of the local 12-vector u at arclength s.
  [[nodiscard]] Vec2 bulk_value(const Vec12& u, double s) const {
    Eigen::Matrix3d a;
    for (int k = 0; k < 3; ++k) a.row(k) << 1.0, triangle[k].x(), triangle[k].y();
    const Vec2 x = segment.point_at(s);
    const Eigen::Vector3d phi = a.transpose().fullPivLu().solve(Eigen::Vector3d(1.0, x.x(), x.y()));
    Vec2 v = Vec2::Zero();
    for (int k = 0; k < 3; ++k) v += phi[k] * Vec2(u[2 * k], u[2 * k + 1]);
    return v;
  }
  [[nodiscard]] Eigen::Matrix2d bulk_gradient(const Vec12& u) const {
    Eigen::Matrix3d a;
    for (int k = 0; k < 3; ++k) a.row(k) << 1.0, triangle[k].x(), triangle[k].y();
    const Eigen::Matrix3d coef = a.inverse();  // column k: coefficients of phi_k
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    for (int k = 0; k < 3; ++k) {
      const Vec2 dphi(coef(1, k), coef(2, k));
      g.row(0) += u[2 * k] * dphi.transpose();
      g.row(1) += u[2 * k + 1] * dphi.transpose();
    }
    return g;
  }
  [[nodiscard]] Vec2 traction(const Vec12& u) const {
    const Eigen::Matrix2d g = bulk_gradient(u);
    const Eigen::Matrix2d eps = 0.5 * (g + g.transpose());
    const Eigen::Matrix2d sigma =
        2.0 * material.mu * eps + material.lambda * eps.trace() * Eigen::Matrix2d::Identity();
    return sigma * outward();
  }
  [[nodiscard]] Vec2 interface_value(const Vec12& u, double s) const {
    const auto& e = segment.elements[element];
    const double L = e.length();
    const Vec2 n = segment.normal;
    const Vec2 t = segment.tangent;
    const Vec2 a(u[6], u[7]);
    const Vec2 b(u[9], u[10]);
    const double xi = (s - e.s_begin) / L;
    const Eigen::Vector4d H = hermite(xi, L);
    const double un = H[0] * n.dot(a) + H[1] * u[8] + H[2] * n.dot(b) + H[3] * u[11];
    const double ut = (1 - xi) * t.dot(a) + xi * t.dot(b);
    return un * n + ut * t;
  }
  [[nodiscard]] Vec2 jump(const Vec12& u, double s) const { return bulk_value(u, s) - interface_value(u, s); }
};

/// Matrix of a bilinear form B(u, v) by evaluation on unit vectors.
template <class Form>
Mat12 matrix_of(const Form& form) {
  Mat12 m;
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) m(i, j) = form(Vec12::Unit(j), Vec12::Unit(i));
  }
  return m;
}

inline Vec12 random_vec12(std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vec12 v;
  for (int k = 0; k < 12; ++k) v[k] = scale * d(rng);
  return v;
}

// EI * int H_i'' H_j'' ds by 5-point Gauss.
inline Mat4 gauss_bending(double EI, double L) {
  Mat4 k = Mat4::Zero();
  for (auto [x, w] : gauss5()) {
    const Eigen::Vector4d d = hermite_dd(x, L);
    k += EI * w * L * d * d.transpose();
  }
  return k;
}

inline Eigen::Matrix2d gauss_truss(double EA, double L) {
  Eigen::Matrix2d k = Eigen::Matrix2d::Zero();
  const Eigen::Vector2d d(-1.0 / L, 1.0 / L);
  for (auto [x, w] : gauss5()) {
    (void)x;
    k += EA * w * L * d * d.transpose();
  }
  return k;
}

// Integral over the fixture's sub-segment with the 5-point rule.
template <class F>
double integrate(const SideFixture& fx, const F& f) {
  double sum = 0.0;
  const double len = fx.s_end - fx.s_begin;
  for (auto [x, w] : gauss5()) sum += w * len * f(fx.s_begin + x * len);
  return sum;
}

struct NormalParts {
  double j;      // n_i . (u_i - u_G)
  double sigma;  // n . sigma . n
};

inline NormalParts normal_parts(const SideFixture& fx, const Vec12& u, double s) {
  const Vec2 ni = fx.outward();
  const Vec2 n = fx.segment.normal;
  return {ni.dot(fx.jump(u, s)), n.dot(fx.traction(u)) * n.dot(ni)};
}

// Contact branch: -(j/alpha, j_v) + (j/eps, j_v) - (sigma_n, j_v) - (j, sigma_n(v)).
inline Mat12 active_oracle(const SideFixture& fx, double gamma0, double alpha) {
  const double eps = 1.0 / (gamma0 / fx.h() + 1.0 / alpha);
  return matrix_of([&](const Vec12& u, const Vec12& v) {
    return integrate(fx, [&](double s) {
      const auto a = normal_parts(fx, u, s);
      const auto b = normal_parts(fx, v, s);
      const long double aj = a.j, as = a.sigma, bj = b.j, bs = b.sigma;
      return static_cast<double>(-aj * bj / alpha + aj * bj / eps - as * bj - aj * bs);
    });
  });
}

// Cohesive branch: -(alpha s + j, s_v) - (s, alpha s_v + j_v) + (alpha s, s_v) + tau_n (alpha s + j, alpha s_v + j_v).
inline Mat12 inactive_oracle(const SideFixture& fx, double gamma0, double alpha) {
  return matrix_of([&](const Vec12& u, const Vec12& v) {
    return integrate(fx, [&](double s) {
      const auto a = normal_parts(fx, u, s);
      const auto b = normal_parts(fx, v, s);
      // Extended precision: for large alpha the terms cancel to a few parts in 1e6.
      const long double al = alpha, t = 1.0L / (static_cast<long double>(fx.h()) / gamma0 + al);
      const long double aj = a.j, as = a.sigma, bj = b.j, bs = b.sigma;
      return static_cast<double>(-(al * as + aj) * bs - as * (al * bs + bj) + al * as * bs +
                                 t * (al * as + aj) * (al * bs + bj));
    });
  });
}

/// Cantilever built-in scenario on a coarse mesh.
inline Scenario coarse_cantilever(const std::string& mode, double EI = 0.0, double target_h = 0.5) {
  Scenario sc = builtin_scenario("cantilever-bend");
  sc.coupling.mode = mode;
  sc.section.EI = EI;
  sc.mesh.target_h = target_h;
  return sc;
}

/// Two blocks (0,1)x(0,1/2) (id 1, minus side) and (0,1)x(1/2,1) (id 2) with
/// a beam along y = 1/2. The bottom edge is clamped; the upper block carries
/// body force f_upper.
inline Problem two_block_problem(CouplingMode mode, double alpha, double beta, const Vec2& f_upper, int n = 4) {
  Problem p;
  p.meshes.push_back(structured_rectangle({0.0, 0.0}, {1.0, 0.5}, n, n / 2, 1));
  p.meshes.push_back(structured_rectangle({0.0, 0.5}, {1.0, 1.0}, n + 1, (n + 1) / 2 + 1, 2));
  const Material m = Material::from_engineering(1e6, 1.0 / 3.0);
  p.materials = {m, m};
  p.body_forces = {Vec2::Zero(), f_upper};
  const std::vector<LabeledPoint> pts{{"W", {0.0, 0.5}}, {"E", {1.0, 0.5}}};
  const std::vector<SegmentSpec> segs{{"W", "E", 2, 1, 0.25}};
  p.interface = build_interface(pts, segs);
  p.sections = {SectionProperties{1e2, 1e5}};
  p.coupling.mode = mode;
  p.coupling.alpha = alpha;
  p.coupling.beta = beta;
  prepare_cuts(p);
  const DofMap dofs = make_dof_map(p);
  p.constraints = clamp_boundary(p, dofs, 0, 0);
  return p;
}

}  // namespace fixtures
