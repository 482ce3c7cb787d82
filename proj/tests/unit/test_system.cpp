#include <doctest.h>

#include "fixtures.hpp"
#include "nitsche/errors.hpp"
#include "nitsche/studies.hpp"

using namespace nitsche;
using fixtures::dense;
using fixtures::rel_diff;

namespace {

// Global rigid motion with interface rotation equal to omega.
Vector rigid_mode(const Problem& p, const DofMap& d, const Vec2& c, double omega) {
  Vector r = Vector::Zero(d.size);
  auto u = [&](const Vec2& x) -> Vec2 { return c + omega * rotate_ccw(x); };
  for (std::size_t m = 0; m < p.meshes.size(); ++m) {
    for (std::size_t k = 0; k < p.meshes[m].nodes.size(); ++k) {
      const Vec2 v = u(p.meshes[m].nodes[k]);
      r[d.bulk(static_cast<int>(m), static_cast<int>(k), 0)] = v.x();
      r[d.bulk(static_cast<int>(m), static_cast<int>(k), 1)] = v.y();
    }
  }
  for (std::size_t k = 0; k < p.interface.nodes.size(); ++k) {
    const Vec2 v = u(p.interface.nodes[k].position);
    r[d.interface(static_cast<int>(k), 0)] = v.x();
    r[d.interface(static_cast<int>(k), 1)] = v.y();
    r[d.interface(static_cast<int>(k), 2)] = omega;
  }
  return r;
}

bool constrains(const Problem& p, int dof) {
  return std::any_of(p.constraints.begin(), p.constraints.end(), [&](const Constraint& c) { return c.dof == dof; });
}

}  // namespace

TEST_CASE("mode names") {
  for (auto m : {CouplingMode::Hybrid, CouplingMode::StrongStiffness, CouplingMode::Cohesive, CouplingMode::Contact}) {
    CHECK(parse_mode(mode_name(m)) == m);
  }
  CHECK_THROWS_AS(parse_mode("Hybrid"), InputError);
}

TEST_CASE("rigid motions lie in the kernel of every linear mode") {
  for (const char* mode : {"hybrid", "strong", "cohesive"}) {
    Scenario sc = fixtures::coarse_cantilever(mode, 1e4);
    sc.section.EA = 1e5;
    sc.coupling.alpha = 1e-4;
    sc.coupling.beta = 1e-3;
    const Problem p = build_problem(sc);
    const GlobalSystem sys = assemble(p);
    const double knorm = sys.matrix.norm();
    for (auto [c, w] : {std::pair{Vec2(1, 0), 0.0}, std::pair{Vec2(0, 1), 0.0}, std::pair{Vec2(0, 0), 1.0}}) {
      const Vector r = rigid_mode(p, sys.dofs, c, w);
      CHECK((sys.matrix * r).norm() <= 1e-12 * knorm * r.norm());
    }
    const SparseMatrix kt = sys.matrix.transpose();
    CHECK((sys.matrix - kt).norm() <= 1e-12 * knorm);
  }
}

TEST_CASE("strong coupling without beam stiffness equals hybrid") {
  const Problem h = build_problem(fixtures::coarse_cantilever("hybrid"));
  const Problem s = build_problem(fixtures::coarse_cantilever("strong", 0.0));
  const GlobalSystem a = assemble(h);
  const GlobalSystem b = assemble(s);
  CHECK(rel_diff(dense(a.matrix), dense(b.matrix)) == 0.0);
  CHECK(rel_diff(a.rhs, b.rhs) == 0.0);
  // EI > 0 changes it.
  const GlobalSystem c = assemble(build_problem(fixtures::coarse_cantilever("strong", 1e4)));
  CHECK(rel_diff(dense(a.matrix), dense(c.matrix)) > 1e-6);
}

TEST_CASE("cohesive with zero compliance equals hybrid") {
  const GlobalSystem a = assemble(build_problem(fixtures::coarse_cantilever("hybrid")));
  const GlobalSystem b = assemble(build_problem(fixtures::coarse_cantilever("cohesive")));
  CHECK(rel_diff(dense(a.matrix), dense(b.matrix)) < 1e-12);
}

TEST_CASE("zero loads give a zero solution") {
  for (const char* mode : {"hybrid", "strong", "cohesive", "contact"}) {
    Scenario sc = fixtures::coarse_cantilever(mode, 1e4);
    sc.loads.body_force = {0.0, 0.0};
    if (std::string(mode) != "hybrid") sc.coupling.alpha = sc.coupling.beta = 1e-5;
    const Problem p = build_problem(sc);
    const Solution s = solve(p);
    CHECK(s.values.norm() == 0.0);
    const PostProcessed post = postprocess(p, assemble(p), s);
    for (std::size_t m = 0; m < p.meshes.size(); ++m) CHECK(post.deformed[m] == p.meshes[m].nodes);
  }
}

TEST_CASE("rotation clamp at A follows EI") {
  const Problem weak = build_problem(fixtures::coarse_cantilever("strong", 0.0));
  const Problem stiff = build_problem(fixtures::coarse_cantilever("strong", 1e4));
  const Problem hyb = build_problem(fixtures::coarse_cantilever("hybrid", 1e4));
  const int a = weak.interface.find_node("A");
  const DofMap d = make_dof_map(weak);
  CHECK(constrains(weak, d.interface(a, 0)));
  CHECK(constrains(weak, d.interface(a, 1)));
  CHECK_FALSE(constrains(weak, d.interface(a, 2)));
  CHECK(constrains(stiff, d.interface(a, 2)));
  CHECK_FALSE(constrains(hyb, d.interface(a, 2)));
}

TEST_CASE("Dirichlet elimination") {
  SparseMatrix k(3, 3);
  std::vector<Eigen::Triplet<double>> t{{0, 0, 4}, {0, 1, 1}, {1, 0, 1}, {1, 1, 3}, {1, 2, 2}, {2, 1, 2}, {2, 2, 5}};
  k.setFromTriplets(t.begin(), t.end());
  const Vector f = Vector::Constant(3, 1.0);

  const auto all = apply_dirichlet(k, f, {{0, 0.0}, {1, 0.0}, {2, 0.0}});
  CHECK(all.matrix.rows() == 0);
  CHECK(all.free_dofs.empty());

  const double v = 0.7;
  const auto r = apply_dirichlet(k, f, {{1, v}});
  REQUIRE(r.free_dofs == std::vector<int>{0, 2});
  CHECK(r.rhs[0] == doctest::Approx(1.0 - 1.0 * v));
  CHECK(r.rhs[1] == doctest::Approx(1.0 - 2.0 * v));
  CHECK(r.matrix.coeff(0, 0) == 4.0);
  CHECK(r.matrix.coeff(1, 1) == 5.0);
  CHECK(r.matrix.coeff(0, 1) == 0.0);

  CHECK_NOTHROW(apply_dirichlet(k, f, {{1, v}, {1, v}}));
  CHECK_THROWS_AS(apply_dirichlet(k, f, {{1, v}, {1, 0.0}}), InputError);
  CHECK_THROWS_AS(apply_dirichlet(k, f, {{3, 0.0}}), InputError);
  CHECK_THROWS_AS(apply_dirichlet(k, f, {{-1, 0.0}}), InputError);
}

TEST_CASE("sparse SPD solve") {
  SparseMatrix id(4, 4);
  id.setIdentity();
  const Vector b = (Vector(4) << 1, -2, 3, 0.5).finished();
  CHECK((solve_spd(id, b) - b).norm() == 0.0);

  SparseMatrix k(2, 2);
  std::vector<Eigen::Triplet<double>> t{{0, 0, 2}, {0, 1, 1}, {1, 0, 1}, {1, 1, 2}};
  k.setFromTriplets(t.begin(), t.end());
  const Vector x = solve_spd(k, Vector::Constant(2, 1.0));
  CHECK(x[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  SparseMatrix indef(2, 2);
  std::vector<Eigen::Triplet<double>> ti{{0, 0, 1}, {0, 1, 2}, {1, 0, 2}, {1, 1, 1}};
  indef.setFromTriplets(ti.begin(), ti.end());
  CHECK_THROWS_AS(solve_spd(indef, Vector::Constant(2, 1.0)), SolverError);
}

TEST_CASE("linear path reports no Newton iterations") {
  const Problem p = build_problem(fixtures::coarse_cantilever("hybrid"));
  const Solution s = solve(p);
  CHECK(s.diagnostics.newton_iterations == 0);
  CHECK(s.diagnostics.converged);
  CHECK(s.values.allFinite());
  CHECK(s.values.norm() > 0.0);
}

TEST_CASE("contact that never closes reproduces the cohesive solution") {
  const double alpha = 1e-3;
  const double beta = 1e-3;
  const Vec2 pull(0.0, 1e5);
  const Problem coh = fixtures::two_block_problem(CouplingMode::Cohesive, alpha, beta, pull);
  const Problem con = fixtures::two_block_problem(CouplingMode::Contact, alpha, beta, pull);
  const Solution a = solve(coh);
  const GlobalSystem sys = assemble(con);
  const Solution b = solve(con, sys);
  CHECK(b.diagnostics.newton_iterations <= 2);
  CHECK(b.diagnostics.active_history.back() == 0);
  CHECK((a.values - b.values).norm() <= 1e-9 * a.values.norm());
  // Every point is open with a positive normal traction.
  const PostProcessed post = postprocess(con, sys, b);
  for (const auto& smp : post.profile) {
    for (int side = 0; side < 2; ++side) {
      CHECK(smp.jump_n[static_cast<std::size_t>(side)] < 0.0);
      CHECK(smp.sigma_n[static_cast<std::size_t>(side)] > 0.0);
    }
  }
}

TEST_CASE("contact Newton converges after the active set settles") {
  Scenario sc = fixtures::coarse_cantilever("contact", 1e4, 0.25);
  sc.coupling.alpha = 1e-5;
  sc.coupling.beta = 1e-5;
  const Problem p = build_problem(sc);
  const GlobalSystem sys = assemble(p);
  const Solution s = solve(p, sys);
  const auto& d = s.diagnostics;
  CHECK(d.converged);
  CHECK(d.newton_iterations >= 1);
  CHECK(d.newton_iterations <= 25);
  REQUIRE(d.residual_history.size() == static_cast<std::size_t>(d.newton_iterations) + 1);
  CHECK(d.residual_history.back() <= 1e-10);
  // Once the active count repeats, the next residual has dropped by 1e6.
  const std::size_t n = d.residual_history.size();
  CHECK(d.active_history[n - 1] == d.active_history[n - 2]);
  CHECK(d.residual_history[n - 1] <= 1e-6 * d.residual_history[n - 2]);
  CHECK(d.active_history.back() > 0);

  // The tangent at the solution is symmetric.
  const auto lin = linearize_contact(sys, s.values);
  const SparseMatrix jt = lin.jacobian.transpose();
  CHECK((lin.jacobian - jt).norm() <= 1e-12 * lin.jacobian.norm());
  CHECK_THROWS_AS(solve_contact(assemble(build_problem(fixtures::coarse_cantilever("hybrid"))), {}), InputError);
}

TEST_CASE("contact rejects zero compliance") {
  Scenario sc = fixtures::coarse_cantilever("contact", 1e4);
  sc.coupling.alpha = 0.0;
  CHECK_THROWS_AS(solve(build_problem(sc)), InputError);
}

TEST_CASE("postprocessing of a rigid translation") {
  const Problem p = build_problem(fixtures::coarse_cantilever("strong", 1e4));
  const GlobalSystem sys = assemble(p);
  Solution s;
  s.values = rigid_mode(p, sys.dofs, Vec2(0.3, -0.2), 0.0);
  const double scale = 2.0;
  const PostProcessed post = postprocess(p, sys, s, scale);
  for (std::size_t m = 0; m < p.meshes.size(); ++m) {
    for (std::size_t k = 0; k < p.meshes[m].nodes.size(); ++k) {
      CHECK((post.displacement[m][k] - Vec2(0.3, -0.2)).norm() < 1e-15);
      CHECK((post.deformed[m][k] - p.meshes[m].nodes[k] - scale * Vec2(0.3, -0.2)).norm() < 1e-14);
    }
    for (const auto& st : post.stress[m]) CHECK(std::abs(st.xx) + std::abs(st.yy) + std::abs(st.xy) < 1e-9);
  }
  for (const auto& smp : post.profile) {
    CHECK(std::abs(smp.jump_n[0]) + std::abs(smp.jump_n[1]) < 1e-14);
    CHECK(std::abs(smp.theta) < 1e-14);
  }
  CHECK(strain_energy(sys, s.values) <= 1e-12 * sys.matrix.norm());
}

TEST_CASE("patch test reproduces the linear field") {
  const auto rep = run_patch_test();
  CHECK(rep.solved);
  CHECK(rep.passed);
  CHECK(rep.max_error <= 1e-9);
  CHECK(rep.max_jump <= 1e-9);

  PatchTestOptions bad;
  bad.gamma0_factor = 0.01;
  const auto fail = run_patch_test(bad);
  CHECK_FALSE(fail.solved);
  CHECK(fail.diagnostic.find("positive definite") != std::string::npos);
}

TEST_CASE("manufactured solution satisfies its interface conditions") {
  for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{1e-2, 3e-2}}) {
    Manufactured ms;
    ms.material = Material::from_engineering(1.0, 1.0 / 3.0);
    ms.alpha = a;
    ms.beta = b;
    const Vec2 n(0, 1);
    const Vec2 t(1, 0);
    auto stress = [&](const Eigen::Matrix2d& g) {
      const Eigen::Matrix2d e = 0.5 * (g + g.transpose());
      return Eigen::Matrix2d(2 * ms.material.mu * e + ms.material.lambda * e.trace() * Eigen::Matrix2d::Identity());
    };
    for (double x : {0.1, 0.45, 0.8}) {
      const Vec2 p(x, 0.5);
      const Vec2 sl = stress(ms.lower_gradient(p)) * n;   // lower side outward normal +n
      const Vec2 su = stress(ms.upper_gradient(p)) * -n;  // upper side outward normal -n
      CHECK((sl + su).norm() < 1e-12);                    // traction balance
      const Eigen::Matrix2d C = a * n * n.transpose() + b * t * t.transpose();
      CHECK((C * sl + ms.lower(p) - ms.interface_value(x)).norm() < 1e-12);
      CHECK((C * su + ms.upper(p) - ms.interface_value(x)).norm() < 1e-12);
    }
    // Body force is -div sigma, checked by central differences of the stress.
    const double hs = 1e-5;
    auto div = [&](auto grad, const Vec2& q) {
      const Eigen::Matrix2d sxp = stress(grad(q + Vec2(hs, 0))), sxm = stress(grad(q - Vec2(hs, 0)));
      const Eigen::Matrix2d syp = stress(grad(q + Vec2(0, hs))), sym = stress(grad(q - Vec2(0, hs)));
      return Vec2((sxp(0, 0) - sxm(0, 0) + syp(0, 1) - sym(0, 1)) / (2 * hs),
                  (sxp(1, 0) - sxm(1, 0) + syp(1, 1) - sym(1, 1)) / (2 * hs));
    };
    const Vec2 qu(0.3, 0.7);
    const Vec2 ql(0.6, 0.2);
    CHECK((div([&](const Vec2& y) { return ms.upper_gradient(y); }, qu) + ms.upper_force(qu)).norm() < 1e-6);
    CHECK((div([&](const Vec2& y) { return ms.lower_gradient(y); }, ql) + ms.lower_force(ql)).norm() < 1e-6);
  }
}

TEST_CASE("log-log slope") {
  CHECK(loglog_slope({1, 2, 4}, {1, 4, 16}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS(loglog_slope({1}, {1}));
}
