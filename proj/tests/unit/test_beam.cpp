#include <doctest.h>

#include "fixtures.hpp"
#include "nitsche/errors.hpp"

using namespace nitsche;
using fixtures::gauss_bending;
using fixtures::gauss_truss;
using fixtures::rel_diff;

namespace {

InterfaceSegment straight_segment(const Vec2& a, const Vec2& b, double element_size) {
  const std::vector<LabeledPoint> pts{{"a", a}, {"b", b}};
  const std::vector<SegmentSpec> segs{{"a", "b", 1, 2, element_size}};
  return build_interface(pts, segs).segments[0];
}

}  // namespace

TEST_CASE("Hermite bending stiffness") {
  Mat4 expect;
  expect << 12, 6, -12, 6, 6, 4, -6, 2, -12, -6, 12, -6, 6, 2, -6, 4;
  const Mat4 k = hermite_bending_stiffness(1.0, 1.0);
  CHECK((k - expect).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((gauss_bending(1.0, 1.0) - expect).cwiseAbs().maxCoeff() <= 1e-12);
  for (auto [EI, L] : {std::pair{1e4, 0.3}, std::pair{2.5, 1.7}}) {
    CHECK(rel_diff(hermite_bending_stiffness(EI, L), gauss_bending(EI, L)) <= 1e-13);
  }
  CHECK(hermite_bending_stiffness(0.0, 0.7).isZero(0.0));
  CHECK_THROWS_AS(hermite_bending_stiffness(1.0, 0.0), InputError);
  CHECK_THROWS_AS(hermite_bending_stiffness(1.0, -1.0), InputError);
  CHECK_THROWS_AS(hermite_bending_stiffness(-1.0, 1.0), InputError);
}

TEST_CASE("Hermite nullspace is the linear fields") {
  for (double L : {1.0, 0.25, 3.0}) {
    const Mat4 k = hermite_bending_stiffness(7.0, L);
    const Eigen::Vector4d lin(0.0, 1.0, L, 1.0);
    const Eigen::Vector4d con(1.0, 0.0, 1.0, 0.0);
    CHECK((k * lin).norm() <= 1e-12 * k.norm());
    CHECK((k * con).norm() <= 1e-12 * k.norm());
    Eigen::SelfAdjointEigenSolver<Mat4> eig(k);
    CHECK(eig.eigenvalues()[1] < 1e-12 * eig.eigenvalues()[3]);
    CHECK(eig.eigenvalues()[2] > 1e-6 * eig.eigenvalues()[3]);
  }
}

TEST_CASE("truss stiffness") {
  Eigen::Matrix2d e;
  e << 0.5, -0.5, -0.5, 0.5;
  CHECK((truss_stiffness(1.0, 2.0) - e).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((gauss_truss(1.0, 2.0) - e).cwiseAbs().maxCoeff() <= 1e-12);
  const Eigen::Matrix2d big = truss_stiffness(1e6, 1.0);
  CHECK(big(0, 0) == 1e6);
  CHECK(big(0, 1) == -1e6);
  CHECK((truss_stiffness(3.0, 0.4) * Eigen::Vector2d(1.0, 1.0)).isZero(0.0));
  CHECK_THROWS_AS(truss_stiffness(1.0, 0.0), InputError);
}

TEST_CASE("local to Cartesian transformation") {
  Eigen::Matrix3d e;
  e << 0, 1, 0, 1, 0, 0, 0, 0, 1;
  CHECK(local_to_cartesian(Vec2(0, 1), Vec2(1, 0)) == e);
  const Vec2 n = Vec2(0.6, 0.8);
  const Vec2 t = rotate_cw(n);
  const Eigen::Matrix3d r = local_to_cartesian(n, t);
  CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-15);
  CHECK(local_to_cartesian(Vec2(1, 0), Vec2(0, 1)) * Eigen::Vector3d(1, 0, 0) == Eigen::Vector3d(1, 0, 0));
  CHECK_THROWS_AS(local_to_cartesian(Vec2(1, 0), Vec2(1, 0)), InputError);
  CHECK_THROWS_AS(local_to_cartesian(Vec2(2, 0), Vec2(0, 1)), InputError);
}

TEST_CASE("interface field evaluation") {
  const InterfaceSegment seg = straight_segment({0.0, 0.0}, {1.0, 0.0}, 0.0);
  const BeamElement& el = seg.elements[0];

  const Vec2 c(0.3, -0.7);
  Vec6 trans;
  trans << c.x(), c.y(), 0.0, c.x(), c.y(), 0.0;
  for (double s : {0.0, 0.13, 0.5, 1.0}) CHECK((evaluate_interface_field(seg, el, s, trans).u - c).norm() < 1e-15);

  // u_n linear from 1 to 3 with slope 2.
  Vec6 lin;
  lin << 0.0, 1.0, 2.0, 0.0, 3.0, 2.0;
  CHECK(evaluate_interface_field(seg, el, 0.5, lin).u_n == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(evaluate_interface_field(seg, el, 0.5, lin).theta == doctest::Approx(2.0).epsilon(1e-14));

  Vec6 bubble;
  bubble << 0.0, 0.0, 1.0, 0.0, 0.0, -1.0;
  CHECK(evaluate_interface_field(seg, el, 0.5, bubble).u_n == doctest::Approx(0.25).epsilon(1e-15));

  CHECK_THROWS_AS(evaluate_interface_field(seg, el, 1.5, bubble), InputError);
  CHECK_THROWS_AS(evaluate_interface_field(seg, el, -0.1, bubble), InputError);
}

TEST_CASE("interface basis matches the Hermite/linear oracle on a tilted frame") {
  const Vec2 n = Vec2(-0.8, 0.6);
  const Vec2 t = rotate_cw(n);
  const double L = 0.7;
  Vec6 u;
  u << 0.1, -0.3, 0.4, 0.25, 0.05, -0.2;
  for (double xi : {0.0, 0.2, 0.5, 0.9}) {
    const Eigen::Vector4d H = fixtures::hermite(xi, L);
    const Vec2 a(u[0], u[1]);
    const Vec2 b(u[3], u[4]);
    const double un = H[0] * n.dot(a) + H[1] * u[2] + H[2] * n.dot(b) + H[3] * u[5];
    const double ut = (1 - xi) * t.dot(a) + xi * t.dot(b);
    CHECK((interface_basis(n, t, xi, L) * u - (un * n + ut * t)).norm() < 1e-15);
  }
}

TEST_CASE("interface load vector") {
  const InterfaceSegment seg = straight_segment({0.0, 0.0}, {1.0, 0.0}, 0.0);
  const BeamElement& el = seg.elements[0];
  auto zero = [](double) { return 0.0; };
  auto one = [](double) { return 1.0; };
  CHECK(interface_load_vector(seg, el, zero, zero).isZero(0.0));

  const Vec6 ft = interface_load_vector(seg, el, zero, one);
  CHECK(ft[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ft[3] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(ft[1]) + std::abs(ft[2]) + std::abs(ft[4]) + std::abs(ft[5]) < 1e-15);

  // Horizontal segment: u_n = u_y, so (u_n1, theta1, u_n2, theta2) = (1, 2, 4, 5).
  const Vec6 fn = interface_load_vector(seg, el, one, zero);
  CHECK(fn[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(fn[2] == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK(fn[4] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(fn[5] == doctest::Approx(-1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("rigid motions carry no beam energy") {
  const InterfaceSegment seg = straight_segment({0.2, -0.4}, {1.1, 0.5}, 0.3);
  REQUIRE(seg.elements.size() >= 2);
  const SectionProperties sec{1e4, 1e6};
  const Vec2 x0(0.7, 1.9);
  const double omega = 0.37;
  for (const auto& el : seg.elements) {
    auto dof = [&](double s) {
      const Vec2 x = seg.point_at(s);
      const Vec2 u = Vec2(0.2, -0.1) + omega * rotate_ccw(x - x0);
      return Eigen::Vector3d(u.x(), u.y(), omega);
    };
    Vec6 u;
    u << dof(el.s_begin), dof(el.s_end);
    const Mat6 k = beam_element_stiffness(seg, el, sec);
    CHECK(u.dot(k * u) <= 1e-12 * k.norm() * u.squaredNorm());
  }
}

TEST_CASE("assembled single-segment beam stiffness") {
  const InterfaceSegment seg = straight_segment({0.0, 0.0}, {0.6, 0.8}, 0.25);
  const int ne = static_cast<int>(seg.elements.size());
  REQUIRE(ne >= 2);
  const int nd = 3 * (ne + 1);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nd, nd);
  for (int e = 0; e < ne; ++e) k.block(3 * e, 3 * e, 6, 6) += beam_element_stiffness(seg, seg.elements[static_cast<std::size_t>(e)], {3.0, 50.0});
  CHECK(rel_diff(k, k.transpose()) < 1e-15);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
  const auto ev = eig.eigenvalues();
  CHECK(ev[0] > -1e-12 * ev[nd - 1]);
  CHECK(std::abs(ev[2]) < 1e-12 * ev[nd - 1]);
  CHECK(ev[3] > 1e-8 * ev[nd - 1]);
}

TEST_CASE("congruence with the local element matrices") {
  const InterfaceSegment seg = straight_segment({0.0, 0.0}, {-0.5, 1.2}, 0.0);
  const BeamElement& el = seg.elements[0];
  const SectionProperties sec{2.0, 30.0};
  Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
  local.block<4, 4>(0, 0) = hermite_bending_stiffness(sec.EI, el.length());
  local.block<2, 2>(4, 4) = truss_stiffness(sec.EA, el.length());
  const auto m = element_local_map(seg.normal, seg.tangent);
  CHECK(rel_diff(beam_element_stiffness(seg, el, sec), m.transpose() * local * m) < 1e-14);

  // Node-wise: the 3x3 transform applied per node gives the same map.
  const Eigen::Matrix3d r = local_to_cartesian(seg.normal, seg.tangent);
  Vec6 cart;
  cart << 0.3, -0.1, 0.2, 0.5, 0.4, -0.3;
  const Eigen::Vector3d l1 = r.transpose() * cart.head<3>();
  const Eigen::Vector3d l2 = r.transpose() * cart.tail<3>();
  const Vec6 loc = m * cart;
  CHECK(std::abs(loc[0] - l1[0]) < 1e-15);
  CHECK(std::abs(loc[1] - l1[2]) < 1e-15);
  CHECK(std::abs(loc[2] - l2[0]) < 1e-15);
  CHECK(std::abs(loc[3] - l2[2]) < 1e-15);
  CHECK(std::abs(loc[4] - l1[1]) < 1e-15);
  CHECK(std::abs(loc[5] - l2[1]) < 1e-15);
}
