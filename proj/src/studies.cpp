#include "nitsche/studies.hpp"

#include <cmath>
#include <numbers>

#include "nitsche/errors.hpp"
#include "nitsche/quadrature.hpp"

namespace nitsche {

namespace {

constexpr double pi = std::numbers::pi;

/// Network of the single straight interface y = 1/2 between subdomain 1
/// (below) and subdomain 2 (above).
InterfaceNetwork split_interface(double element_size, const std::vector<SubdomainPolygon>& polygons) {
  const std::vector<LabeledPoint> points{{"W", Vec2(0.0, 0.5)}, {"E", Vec2(1.0, 0.5)}};
  const std::vector<SegmentSpec> specs{{"W", "E", 2, 1, element_size}};
  return build_interface(points, specs, polygons);
}

std::vector<SubdomainPolygon> split_polygons() {
  return {{1, {Vec2(0, 0), Vec2(1, 0), Vec2(1, 0.5), Vec2(0, 0.5)}},
          {2, {Vec2(0, 0.5), Vec2(1, 0.5), Vec2(1, 1), Vec2(0, 1)}}};
}

/// Lower mesh interface edge is tag 2, upper mesh interface edge is tag 0.
void clamp_outer(Problem& p, const std::function<Vec2(const Vec2&)>& lower,
                 const std::function<Vec2(const Vec2&)>& upper) {
  const DofMap dofs = make_dof_map(p);
  for (int tag : {0, 1, 3}) {
    auto c = clamp_boundary(p, dofs, 0, tag, lower);
    p.constraints.insert(p.constraints.end(), c.begin(), c.end());
  }
  for (int tag : {1, 2, 3}) {
    auto c = clamp_boundary(p, dofs, 1, tag, upper);
    p.constraints.insert(p.constraints.end(), c.begin(), c.end());
  }
}

void clamp_interface_ends(Problem& p, const std::function<Vec2(const Vec2&)>& value) {
  const DofMap dofs = make_dof_map(p);
  for (const char* label : {"W", "E"}) {
    const int node = p.interface.find_node(label);
    const auto c = clamp_interface_node(dofs, node, false, value(p.interface.nodes[static_cast<std::size_t>(node)].position));
    p.constraints.insert(p.constraints.end(), c.begin(), c.end());
  }
}

/// Collapsed 4x4 Gauss rule on a triangle: points and weights (summing to the area).
std::vector<std::pair<Vec2, double>> triangle_rule(const Triangle& t) {
  std::vector<std::pair<Vec2, double>> out;
  const double jac = 2.0 * signed_area(t);
  for (const auto& a : gauss4()) {
    for (const auto& b : gauss4()) {
      const double xi = a.x;
      const double eta = (1.0 - a.x) * b.x;
      const Vec2 p = t[0] + xi * (t[1] - t[0]) + eta * (t[2] - t[0]);
      out.emplace_back(p, a.w * b.w * (1.0 - a.x) * jac);
    }
  }
  return out;
}

}  // namespace

Vec2 patch_field(const Vec2& x) {
  return {0.1 + 0.2 * x.x() + 0.3 * x.y(), -0.1 + 0.4 * x.x() - 0.25 * x.y()};
}

Problem make_patch_problem(const PatchTestOptions& o) {
  if (!(o.h_top > 0.0) || !(o.h_bottom > 0.0)) throw InputError("patch test mesh sizes must be positive");
  Problem p;
  const auto polygons = split_polygons();
  p.meshes.push_back(triangulate_subdomain(polygons[0].vertices, o.h_bottom, 1));
  p.meshes.push_back(triangulate_subdomain(polygons[1].vertices, o.h_top, 2));
  const Material m = Material::from_engineering(1e6, 1.0 / 3.0);
  p.materials = {m, m};
  p.body_forces = {Vec2::Zero(), Vec2::Zero()};
  p.interface = split_interface(0.5 * (o.h_top + o.h_bottom), polygons);
  p.sections = {SectionProperties{0.0, 0.0}};
  p.coupling.mode = CouplingMode::StrongStiffness;
  p.coupling.gamma0_factor = o.gamma0_factor;
  prepare_cuts(p);
  clamp_outer(p, patch_field, patch_field);
  clamp_interface_ends(p, patch_field);
  return p;
}

PatchTestReport run_patch_test(const PatchTestOptions& options) {
  PatchTestReport rep;
  const Problem p = make_patch_problem(options);
  const GlobalSystem sys = assemble(p);
  rep.dofs = sys.dofs.size;
  Solution sol;
  try {
    sol = solve_linear(sys, p.constraints);
  } catch (const SolverError& e) {
    rep.diagnostic = e.what();
    return rep;
  }
  rep.solved = true;
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t mi = 0; mi < p.meshes.size(); ++mi) {
    for (std::size_t k = 0; k < p.meshes[mi].nodes.size(); ++k) {
      const Vec2 exact = patch_field(p.meshes[mi].nodes[k]);
      const int node = static_cast<int>(k);
      const Vec2 uh(sol.values[sys.dofs.bulk(static_cast<int>(mi), node, 0)],
                    sol.values[sys.dofs.bulk(static_cast<int>(mi), node, 1)]);
      err = std::max(err, (uh - exact).norm());
      ref = std::max(ref, exact.norm());
    }
  }
  for (std::size_t k = 0; k < p.interface.nodes.size(); ++k) {
    const Vec2 exact = patch_field(p.interface.nodes[k].position);
    const int node = static_cast<int>(k);
    const Vec2 uh(sol.values[sys.dofs.interface(node, 0)], sol.values[sys.dofs.interface(node, 1)]);
    err = std::max(err, (uh - exact).norm());
  }
  rep.max_error = ref > 0.0 ? err / ref : err;
  const auto post = postprocess(p, sys, sol);
  for (const auto& s : post.profile) {
    for (int side = 0; side < 2; ++side) {
      rep.max_jump = std::max(rep.max_jump, std::hypot(s.jump_n[side], s.jump_t[side]));
    }
  }
  rep.passed = rep.max_error <= options.tolerance;
  return rep;
}

Vec2 Manufactured::lower(const Vec2& p) const {
  const double x = p.x();
  const double y = p.y();
  return {std::sin(pi * x) * std::sin(pi * y), x * x * y * (1.0 - y)};
}

Vec2 Manufactured::upper(const Vec2& p) const {
  const double x = p.x();
  const double y = p.y();
  const double lam = material.lambda;
  const double mu = material.mu;
  const double c = lam * beta * mu / (lam + 2.0 * mu);
  const Vec2 d(beta * mu * x + 2.0 * alpha * lam * pi * pi * (y - 0.5) * std::sin(pi * x),
               2.0 * alpha * lam * pi * std::cos(pi * x) - c * (y - 0.5));
  return lower(p) + d;
}

Eigen::Matrix2d Manufactured::lower_gradient(const Vec2& p) const {
  const double x = p.x();
  const double y = p.y();
  Eigen::Matrix2d g;
  g << pi * std::cos(pi * x) * std::sin(pi * y), pi * std::sin(pi * x) * std::cos(pi * y),  //
      2.0 * x * y * (1.0 - y), x * x * (1.0 - 2.0 * y);
  return g;
}

Eigen::Matrix2d Manufactured::upper_gradient(const Vec2& p) const {
  const double x = p.x();
  const double y = p.y();
  const double lam = material.lambda;
  const double mu = material.mu;
  const double c = lam * beta * mu / (lam + 2.0 * mu);
  const double k = 2.0 * alpha * lam;
  Eigen::Matrix2d g;
  g << beta * mu + k * pi * pi * pi * (y - 0.5) * std::cos(pi * x), k * pi * pi * std::sin(pi * x),  //
      -k * pi * pi * std::sin(pi * x), -c;
  return lower_gradient(p) + g;
}

Vec2 Manufactured::lower_force(const Vec2& p) const {
  const double x = p.x();
  const double y = p.y();
  const double lam = material.lambda;
  const double mu = material.mu;
  const double ss = std::sin(pi * x) * std::sin(pi * y);
  const Vec2 lap(-2.0 * pi * pi * ss, 2.0 * y * (1.0 - y) - 2.0 * x * x);
  const Vec2 grad_div(-pi * pi * ss + 2.0 * x * (1.0 - 2.0 * y),
                      pi * pi * std::cos(pi * x) * std::cos(pi * y) - 2.0 * x * x);
  return -(mu * lap + (lam + mu) * grad_div);
}

Vec2 Manufactured::upper_force(const Vec2& p) const {
  const double x = p.x();
  const double y = p.y();
  const double lam = material.lambda;
  const double mu = material.mu;
  const double k = 2.0 * alpha * lam;
  const Vec2 div_sigma_d(-(lam + 2.0 * mu) * k * std::pow(pi, 4) * (y - 0.5) * std::sin(pi * x),
                         lam * k * std::pow(pi, 3) * std::cos(pi * x));
  return lower_force(p) - div_sigma_d;
}

Vec2 Manufactured::interface_value(double x) const {
  const Vec2 u = lower(Vec2(x, 0.5));
  // u + C sigma(u) n with n = (0, 1): sigma_xy = mu x / 2, sigma_yy = lambda pi cos(pi x).
  return u + Vec2(beta * material.mu * 0.5 * x, alpha * material.lambda * pi * std::cos(pi * x));
}

Problem make_manufactured_problem(const ConvergenceOptions& o, int n) {
  if (n < 1) throw InputError("convergence level must be >= 1");
  Manufactured mf{Material::from_engineering(o.youngs_modulus, o.poisson_ratio), o.alpha, o.beta};
  Problem p;
  const int ny_top = std::max(1, n / 2);
  const int nx_low = std::max(1, (3 * n) / 2);
  const int ny_low = std::max(1, (3 * n) / 4);
  p.meshes.push_back(structured_rectangle(Vec2(0, 0), Vec2(1, 0.5), nx_low, ny_low, 1));
  p.meshes.push_back(structured_rectangle(Vec2(0, 0.5), Vec2(1, 1), n, ny_top, 2));
  p.materials = {mf.material, mf.material};
  p.body_forces = {Vec2::Zero(), Vec2::Zero()};
  p.body_force_fields = {[mf](const Vec2& x) { return mf.lower_force(x); },
                         [mf](const Vec2& x) { return mf.upper_force(x); }};
  p.interface = split_interface(0.5 * (1.0 / n + 1.0 / nx_low), split_polygons());
  p.sections = {SectionProperties{0.0, 0.0}};
  p.coupling.mode = o.mode;
  p.coupling.gamma0_factor = o.gamma0_factor;
  p.coupling.alpha = o.alpha;
  p.coupling.beta = o.beta;
  prepare_cuts(p);
  clamp_outer(p, [mf](const Vec2& x) { return mf.lower(x); }, [mf](const Vec2& x) { return mf.upper(x); });
  clamp_interface_ends(p, [mf](const Vec2& x) { return mf.interface_value(x.x()); });
  return p;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("slope needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport run_convergence(const ConvergenceOptions& o) {
  if (o.levels.empty()) throw InputError("convergence study needs at least one level");
  ConvergenceReport rep;
  Manufactured mf{Material::from_engineering(o.youngs_modulus, o.poisson_ratio), o.alpha, o.beta};
  for (int n : o.levels) {
    const Problem p = make_manufactured_problem(o, n);
    const GlobalSystem sys = assemble(p);
    const Solution sol = solve(p, sys);
    const auto post = postprocess(p, sys, sol);

    double l2 = 0.0;
    double energy = 0.0;
    for (std::size_t mi = 0; mi < p.meshes.size(); ++mi) {
      const auto& mesh = p.meshes[mi];
      const bool upper = mi == 1;
      const Eigen::Matrix3d d = constitutive_matrix(p.materials[mi]);
      for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& v = mesh.triangles[t];
        const Triangle tri = mesh.corners(static_cast<int>(t));
        Vec6 ue;
        for (int a = 0; a < 3; ++a) ue.segment<2>(2 * a) = post.displacement[mi][static_cast<std::size_t>(v[a])];
        const Eigen::Vector3d strain_h = strain_matrix(tri) * ue;
        for (const auto& [x, w] : triangle_rule(tri)) {
          const Eigen::Vector3d l = barycentric(tri, x);
          Vec2 uh = Vec2::Zero();
          for (int a = 0; a < 3; ++a) uh += l[a] * ue.segment<2>(2 * a);
          const Vec2 ex = upper ? mf.upper(x) : mf.lower(x);
          l2 += w * (uh - ex).squaredNorm();
          const Eigen::Matrix2d g = upper ? mf.upper_gradient(x) : mf.lower_gradient(x);
          const Eigen::Vector3d e = strain_h - Eigen::Vector3d(g(0, 0), g(1, 1), g(0, 1) + g(1, 0));
          energy += w * e.dot(d * e);
        }
      }
    }
    rep.rows.push_back({n, 1.0 / n, sys.dofs.size, std::sqrt(l2), std::sqrt(energy)});
  }
  if (rep.rows.size() < 2) {
    rep.warnings.push_back("a single mesh level gives no convergence slope");
  } else {
    std::vector<double> h, l2, en;
    for (const auto& r : rep.rows) {
      h.push_back(r.h);
      l2.push_back(r.l2_error);
      en.push_back(r.energy_error);
    }
    rep.l2_slope = loglog_slope(h, l2);
    rep.energy_slope = loglog_slope(h, en);
  }
  return rep;
}

}  // namespace nitsche
