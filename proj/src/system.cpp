#include "nitsche/system.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "nitsche/errors.hpp"

namespace nitsche {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

Triangle triangle_of(const SubdomainMesh& mesh, int t) {
  const auto& v = mesh.triangles[static_cast<std::size_t>(t)];
  return {mesh.nodes[v[0]], mesh.nodes[v[1]], mesh.nodes[v[2]]};
}

template <int N>
void scatter(Triplets& trips, const std::array<int, N>& dofs, const Eigen::Matrix<double, N, N>& k) {
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < N; ++b) {
      if (k(a, b) != 0.0) trips.emplace_back(dofs[a], dofs[b], k(a, b));
    }
  }
}

double side_gamma0(const CouplingParams& params, const Material& material) {
  if (params.gamma0) return *params.gamma0;
  return params.gamma0_factor * (material.lambda + material.mu);
}

void validate_params(const CouplingParams& p) {
  if (p.gamma0 && !(*p.gamma0 > 0.0)) throw InputError("gamma0 must be positive");
  if (!p.gamma0 && !(p.gamma0_factor > 0.0)) throw InputError("gamma0 factor must be positive");
  if (p.alpha < 0.0 || p.beta < 0.0) throw InputError("alpha and beta must be non-negative");
  if (p.mode == CouplingMode::Contact && !(p.alpha > 0.0)) {
    throw InputError("contact mode requires alpha > 0 (the plus-part form divides by alpha)");
  }
}

std::array<int, 12> site_dofs(const DofMap& dofs, const SubdomainMesh& mesh, int mesh_index, int triangle,
                              const BeamElement& el) {
  std::array<int, 12> out{};
  const auto& v = mesh.triangles[static_cast<std::size_t>(triangle)];
  for (int a = 0; a < 3; ++a) {
    out[2 * a] = dofs.bulk(mesh_index, v[a], 0);
    out[2 * a + 1] = dofs.bulk(mesh_index, v[a], 1);
  }
  for (int c = 0; c < 3; ++c) {
    out[6 + c] = dofs.interface(el.node_begin, c);
    out[9 + c] = dofs.interface(el.node_end, c);
  }
  return out;
}

double inf_norm(const SparseMatrix& m) {
  Vector rows = Vector::Zero(m.rows());
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) rows[it.row()] += std::abs(it.value());
  }
  return rows.size() ? rows.maxCoeff() : 0.0;
}

}  // namespace

const char* mode_name(CouplingMode mode) {
  switch (mode) {
    case CouplingMode::Hybrid: return "hybrid";
    case CouplingMode::StrongStiffness: return "strong";
    case CouplingMode::Cohesive: return "cohesive";
    case CouplingMode::Contact: return "contact";
  }
  return "?";
}

CouplingMode parse_mode(const std::string& name) {
  if (name == "hybrid") return CouplingMode::Hybrid;
  if (name == "strong") return CouplingMode::StrongStiffness;
  if (name == "cohesive") return CouplingMode::Cohesive;
  if (name == "contact") return CouplingMode::Contact;
  throw InputError("unknown coupling mode '" + name + "' (expected hybrid, strong, cohesive or contact)");
}

int Problem::mesh_index(int subdomain_id) const {
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    if (meshes[k].subdomain_id == subdomain_id) return static_cast<int>(k);
  }
  return -1;
}

void prepare_cuts(Problem& problem) {
  problem.cuts.clear();
  for (std::size_t k = 0; k < problem.interface.segments.size(); ++k) {
    const auto& seg = problem.interface.segments[k];
    const int plus = problem.mesh_index(seg.plus_side);
    const int minus = problem.mesh_index(seg.minus_side);
    if (plus < 0 || minus < 0) {
      std::ostringstream os;
      os << "interface segment " << k << " refers to a subdomain without mesh";
      throw GeometryError(os.str());
    }
    problem.cuts.push_back(
        build_cut_partition(seg, problem.meshes[plus], problem.meshes[minus], static_cast<int>(k)));
  }
}

DofMap make_dof_map(const Problem& problem) {
  DofMap d;
  int offset = 0;
  for (const auto& m : problem.meshes) {
    d.bulk_offset.push_back(offset);
    offset += 2 * static_cast<int>(m.nodes.size());
  }
  d.interface_offset = offset;
  d.size = offset + 3 * static_cast<int>(problem.interface.nodes.size());
  return d;
}

std::vector<Constraint> clamp_boundary(const Problem& problem, const DofMap& dofs, int mesh, int tag,
                                       const std::function<Vec2(const Vec2&)>& value) {
  const auto& m = problem.meshes.at(static_cast<std::size_t>(mesh));
  std::set<int> nodes;
  for (const auto& e : m.boundary_edges) {
    if (e.tag != tag) continue;
    const auto [a, b] = m.edge_nodes(e);
    nodes.insert(a);
    nodes.insert(b);
  }
  std::vector<Constraint> out;
  for (int n : nodes) {
    const Vec2 v = value ? value(m.nodes[n]) : Vec2::Zero();
    out.push_back({dofs.bulk(mesh, n, 0), v.x()});
    out.push_back({dofs.bulk(mesh, n, 1), v.y()});
  }
  return out;
}

std::vector<Constraint> clamp_interface_node(const DofMap& dofs, int node, bool rotation, const Vec2& value) {
  std::vector<Constraint> out{{dofs.interface(node, 0), value.x()}, {dofs.interface(node, 1), value.y()}};
  if (rotation) out.push_back({dofs.interface(node, 2), 0.0});
  return out;
}

GlobalSystem assemble(const Problem& problem) {
  validate_params(problem.coupling);
  const std::size_t nm = problem.meshes.size();
  if (problem.materials.size() != nm) throw InputError("one material per subdomain mesh required");
  if (problem.sections.size() != problem.interface.segments.size()) {
    throw InputError("one section per interface segment required");
  }
  if (problem.cuts.size() != problem.interface.segments.size()) {
    throw InputError("cut partition missing; call prepare_cuts first");
  }

  GlobalSystem sys;
  sys.mode = problem.coupling.mode;
  sys.dofs = make_dof_map(problem);
  sys.rhs = Vector::Zero(sys.dofs.size);
  Triplets trips;

  for (std::size_t mi = 0; mi < nm; ++mi) {
    const auto& mesh = problem.meshes[mi];
    const int m = static_cast<int>(mi);
    const bool has_field = mi < problem.body_force_fields.size() && problem.body_force_fields[mi];
    const Vec2 f = mi < problem.body_forces.size() ? problem.body_forces[mi] : Vec2::Zero();
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& v = mesh.triangles[t];
      const Triangle tri = triangle_of(mesh, static_cast<int>(t));
      std::array<int, 6> d{};
      for (int a = 0; a < 3; ++a) {
        d[2 * a] = sys.dofs.bulk(m, v[a], 0);
        d[2 * a + 1] = sys.dofs.bulk(m, v[a], 1);
      }
      scatter<6>(trips, d, p1_stiffness(tri, problem.materials[mi]));
      Vec6 load;
      if (has_field) {
        // Edge-midpoint rule, exact for quadratic integrands.
        load.setZero();
        const double w = signed_area(tri) / 3.0;
        for (int e = 0; e < 3; ++e) {
          const int a = e;
          const int b = (e + 1) % 3;
          const Vec2 fm = problem.body_force_fields[mi](0.5 * (tri[a] + tri[b]));
          load.segment<2>(2 * a) += 0.5 * w * fm;
          load.segment<2>(2 * b) += 0.5 * w * fm;
        }
      } else {
        load = body_load_vector(tri, f);
      }
      for (int a = 0; a < 6; ++a) sys.rhs[d[a]] += load[a];
    }
  }

  const bool beams = problem.coupling.mode != CouplingMode::Hybrid;
  for (std::size_t si = 0; si < problem.interface.segments.size(); ++si) {
    const auto& seg = problem.interface.segments[si];
    const auto& section = problem.sections[si];
    if (section.EI < 0.0 || section.EA < 0.0) throw InputError("EI and EA must be non-negative");
    const InterfaceLoad* load = si < problem.interface_loads.size() ? &problem.interface_loads[si] : nullptr;
    for (const auto& el : seg.elements) {
      std::array<int, 6> d{};
      for (int c = 0; c < 3; ++c) {
        d[c] = sys.dofs.interface(el.node_begin, c);
        d[3 + c] = sys.dofs.interface(el.node_end, c);
      }
      if (beams && (section.EI > 0.0 || section.EA > 0.0)) scatter<6>(trips, d, beam_element_stiffness(seg, el, section));
      if (load && (load->f_n || load->f_t)) {
        const Vec6 fl = interface_load_vector(seg, el, load->f_n, load->f_t);
        for (int a = 0; a < 6; ++a) sys.rhs[d[a]] += fl[a];
      }
    }

    const auto& cut = problem.cuts[si];
    const int mesh_of_side[2] = {problem.mesh_index(seg.minus_side), problem.mesh_index(seg.plus_side)};
    for (std::size_t pi = 0; pi < cut.pieces.size(); ++pi) {
      const auto& piece = cut.pieces[pi];
      const auto& el = seg.elements[static_cast<std::size_t>(piece.element)];
      for (int side = 0; side < 2; ++side) {
        CouplingSite site;
        site.segment = static_cast<int>(si);
        site.piece = static_cast<int>(pi);
        site.side = side;
        site.mesh = mesh_of_side[side];
        site.triangle = side == 0 ? piece.minus_triangle : piece.plus_triangle;
        const auto& mesh = problem.meshes[static_cast<std::size_t>(site.mesh)];
        const auto& material = problem.materials[static_cast<std::size_t>(site.mesh)];
        const Vec2 normal = side == 0 ? Vec2(seg.normal) : Vec2(-seg.normal);
        site.trace = make_side_trace(seg, el, piece.s_begin, piece.s_end, triangle_of(mesh, site.triangle), material,
                                     normal);
        site.params = {side_gamma0(problem.coupling, material), problem.coupling.alpha, problem.coupling.beta};
        site.dofs = site_dofs(sys.dofs, mesh, site.mesh, site.triangle, el);

        Mat12 k;
        switch (problem.coupling.mode) {
          case CouplingMode::Hybrid:
          case CouplingMode::StrongStiffness:
            k = hybrid_block(site.trace, site.params.gamma0);
            break;
          case CouplingMode::Cohesive:
            k = cohesive_block(site.trace, site.params);
            break;
          case CouplingMode::Contact:
            k = cohesive_component(site.trace, site.trace.tangent, site.params.gamma0, site.params.beta);
            break;
        }
        scatter<12>(trips, site.dofs, k);
        sys.sites.push_back(std::move(site));
      }
    }
  }

  sys.matrix.resize(sys.dofs.size, sys.dofs.size);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

ReducedSystem apply_dirichlet(const SparseMatrix& matrix, const Vector& rhs, const std::vector<Constraint>& constraints) {
  const int n = static_cast<int>(matrix.rows());
  ReducedSystem r;
  r.constrained.assign(static_cast<std::size_t>(n), false);
  r.prescribed = Vector::Zero(n);
  for (const auto& c : constraints) {
    if (c.dof < 0 || c.dof >= n) {
      std::ostringstream os;
      os << "constraint on nonexistent DOF " << c.dof << " (system has " << n << ")";
      throw InputError(os.str());
    }
    auto i = static_cast<std::size_t>(c.dof);
    if (r.constrained[i] && r.prescribed[c.dof] != c.value) {
      std::ostringstream os;
      os << "conflicting prescribed values on DOF " << c.dof;
      throw InputError(os.str());
    }
    r.constrained[i] = true;
    r.prescribed[c.dof] = c.value;
  }
  std::vector<int> reduced(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    if (!r.constrained[static_cast<std::size_t>(i)]) {
      reduced[static_cast<std::size_t>(i)] = static_cast<int>(r.free_dofs.size());
      r.free_dofs.push_back(i);
    }
  }
  const Vector correction = matrix * r.prescribed;
  const int nf = static_cast<int>(r.free_dofs.size());
  r.rhs.resize(nf);
  for (int k = 0; k < nf; ++k) r.rhs[k] = rhs[r.free_dofs[k]] - correction[r.free_dofs[k]];

  Triplets trips;
  for (int col = 0; col < matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) {
      const int a = reduced[static_cast<std::size_t>(it.row())];
      const int b = reduced[static_cast<std::size_t>(it.col())];
      if (a >= 0 && b >= 0) trips.emplace_back(a, b, it.value());
    }
  }
  r.matrix.resize(nf, nf);
  r.matrix.setFromTriplets(trips.begin(), trips.end());
  return r;
}

Vector solve_spd(const SparseMatrix& matrix, const Vector& rhs) {
  if (matrix.rows() == 0) return Vector(0);
  Eigen::SimplicialLLT<SparseMatrix> llt(matrix);
  if (llt.info() != Eigen::Success) {
    throw SolverError("sparse Cholesky failed: matrix not positive definite; gamma0 may be too small");
  }
  Vector x = llt.solve(rhs);
  if (llt.info() != Eigen::Success || !x.allFinite()) throw SolverError("sparse Cholesky solve failed");
  const double res = (matrix * x - rhs).norm();
  const double scale = inf_norm(matrix) * x.norm() + rhs.norm();
  if (res > 1e-10 * scale) {
    std::ostringstream os;
    os << "linear solve residual " << res << " exceeds tolerance (scale " << scale
       << "); matrix not positive definite or badly conditioned, gamma0 may be too small";
    throw SolverError(os.str());
  }
  return x;
}

namespace {

Vector expand(const ReducedSystem& r, const Vector& x) {
  Vector full = r.prescribed;
  for (std::size_t k = 0; k < r.free_dofs.size(); ++k) full[r.free_dofs[k]] = x[static_cast<Eigen::Index>(k)];
  return full;
}

}  // namespace

Solution solve_linear(const GlobalSystem& system, const std::vector<Constraint>& constraints) {
  const auto r = apply_dirichlet(system.matrix, system.rhs, constraints);
  Solution sol;
  sol.values = expand(r, solve_spd(r.matrix, r.rhs));
  sol.diagnostics.newton_iterations = 0;
  return sol;
}

Vec12 gather(const CouplingSite& site, const Vector& u) {
  Vec12 out;
  for (int a = 0; a < 12; ++a) out[a] = u[site.dofs[static_cast<std::size_t>(a)]];
  return out;
}

ContactLinearization linearize_contact(const GlobalSystem& system, const Vector& u) {
  ContactLinearization lin;
  lin.residual = system.matrix * u - system.rhs;
  Triplets trips;
  trips.reserve(system.sites.size() * 144);
  for (const auto& site : system.sites) {
    const auto eval = contact_residual(site.trace, gather(site, u), site.params.gamma0, site.params.alpha);
    for (int a = 0; a < 12; ++a) lin.residual[site.dofs[static_cast<std::size_t>(a)]] += eval.residual[a];
    scatter<12>(trips, site.dofs, contact_jacobian(site.trace, eval.state, site.params.gamma0, site.params.alpha));
    lin.active += eval.state.active_count();
    lin.states.push_back(eval.state);
  }
  SparseMatrix jc(system.matrix.rows(), system.matrix.cols());
  jc.setFromTriplets(trips.begin(), trips.end());
  lin.jacobian = system.matrix + jc;
  return lin;
}

Solution solve_contact(const GlobalSystem& system, const std::vector<Constraint>& constraints,
                       const std::optional<Vector>& initial_guess, const NewtonOptions& options) {
  if (system.mode != CouplingMode::Contact) throw InputError("solve_contact requires a Contact-mode system");
  const int n = system.dofs.size;

  // Activity pattern per site and quadrature point, compared between iterations.
  auto pattern_of = [](const std::vector<ContactState>& states) {
    std::vector<bool> p;
    for (const auto& s : states) {
      for (const auto& q : s.points) p.push_back(q.active);
    }
    return p;
  };

  Solution sol;
  std::vector<bool> previous;
  if (initial_guess) {
    if (initial_guess->size() != n) throw InputError("initial guess has wrong length");
    sol.values = *initial_guess;
    const auto r = apply_dirichlet(system.matrix, system.rhs, constraints);
    for (int k = 0; k < n; ++k) {
      if (r.constrained[static_cast<std::size_t>(k)]) sol.values[k] = r.prescribed[k];
    }
  } else {
    // Cohesive-branch start: every point inactive.
    Triplets trips;
    for (const auto& site : system.sites) {
      scatter<12>(trips, site.dofs, contact_jacobian(site.trace, ContactState{}, site.params.gamma0, site.params.alpha));
    }
    SparseMatrix jc(n, n);
    jc.setFromTriplets(trips.begin(), trips.end());
    const SparseMatrix k0 = system.matrix + jc;
    const auto r = apply_dirichlet(k0, system.rhs, constraints);
    sol.values = expand(r, solve_spd(r.matrix, r.rhs));
    previous.assign(system.sites.size() * 4, false);
  }

  // Newton updates vanish on constrained DOFs.
  std::vector<Constraint> homogeneous = constraints;
  for (auto& c : homogeneous) c.value = 0.0;

  for (int it = 0;; ++it) {
    const auto lin = linearize_contact(system, sol.values);
    const auto r = apply_dirichlet(lin.jacobian, -lin.residual, homogeneous);
    const Vector& res = r.rhs;
    Vector rhs_free(static_cast<Eigen::Index>(r.free_dofs.size()));
    for (std::size_t k = 0; k < r.free_dofs.size(); ++k) rhs_free[static_cast<Eigen::Index>(k)] = system.rhs[r.free_dofs[k]];
    const double scale = rhs_free.norm() + inf_norm(lin.jacobian) * sol.values.norm();
    const double rel = scale > 0.0 ? res.norm() / scale : res.norm();
    sol.diagnostics.residual_history.push_back(rel);
    sol.diagnostics.active_history.push_back(lin.active);
    const auto pattern = pattern_of(lin.states);
    if (rel <= options.tolerance && pattern == previous) {
      sol.diagnostics.newton_iterations = it;
      sol.diagnostics.converged = true;
      return sol;
    }
    if (it >= options.max_iterations) {
      std::ostringstream os;
      os << "semismooth Newton did not converge in " << options.max_iterations << " iterations; residual history:";
      for (double h : sol.diagnostics.residual_history) os << ' ' << h;
      throw SolverError(os.str());
    }
    previous = pattern;
    const Vector delta = solve_spd(r.matrix, res);
    for (std::size_t k = 0; k < r.free_dofs.size(); ++k) sol.values[r.free_dofs[k]] += delta[static_cast<Eigen::Index>(k)];
  }
}

Solution solve(const Problem& problem, const GlobalSystem& system) {
  if (system.mode == CouplingMode::Contact) return solve_contact(system, problem.constraints);
  return solve_linear(system, problem.constraints);
}

Solution solve(const Problem& problem) { return solve(problem, assemble(problem)); }

PostProcessed postprocess(const Problem& problem, const GlobalSystem& system, const Solution& solution, double scale) {
  const auto& u = solution.values;
  const auto& dofs = system.dofs;
  PostProcessed out;
  for (std::size_t mi = 0; mi < problem.meshes.size(); ++mi) {
    const auto& mesh = problem.meshes[mi];
    const int m = static_cast<int>(mi);
    std::vector<Vec2> disp;
    std::vector<Vec2> def;
    for (std::size_t k = 0; k < mesh.nodes.size(); ++k) {
      const int node = static_cast<int>(k);
      const Vec2 d(u[dofs.bulk(m, node, 0)], u[dofs.bulk(m, node, 1)]);
      disp.push_back(d);
      def.push_back(mesh.nodes[k] + scale * d);
    }
    std::vector<Stress2> stress;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& v = mesh.triangles[t];
      Vec6 ue;
      for (int a = 0; a < 3; ++a) ue.segment<2>(2 * a) = disp[static_cast<std::size_t>(v[a])];
      stress.push_back(element_stress(triangle_of(mesh, static_cast<int>(t)), ue, problem.materials[mi]));
    }
    out.displacement.push_back(std::move(disp));
    out.deformed.push_back(std::move(def));
    out.stress.push_back(std::move(stress));
  }
  for (std::size_t k = 0; k < problem.interface.nodes.size(); ++k) {
    const int node = static_cast<int>(k);
    out.interface_displacement.emplace_back(u[dofs.interface(node, 0)], u[dofs.interface(node, 1)]);
    out.interface_rotation.push_back(u[dofs.interface(node, 2)]);
  }

  // Sites come in (minus, plus) pairs per sub-segment.
  for (std::size_t k = 0; k + 1 < system.sites.size(); k += 2) {
    const auto& a = system.sites[k];
    const auto& b = system.sites[k + 1];
    const auto& seg = problem.interface.segments[static_cast<std::size_t>(a.segment)];
    const auto& piece = problem.cuts[static_cast<std::size_t>(a.segment)].pieces[static_cast<std::size_t>(a.piece)];
    const auto& el = seg.elements[static_cast<std::size_t>(piece.element)];
    Vec6 ie;
    for (int c = 0; c < 3; ++c) {
      ie[c] = u[dofs.interface(el.node_begin, c)];
      ie[3 + c] = u[dofs.interface(el.node_end, c)];
    }
    const Vec12 ua = gather(a, u);
    const Vec12 ub = gather(b, u);
    for (std::size_t q = 0; q < a.trace.points.size(); ++q) {
      ProfileSample p;
      p.segment = a.segment;
      p.s = a.trace.points[q].s;
      const auto iv = evaluate_interface_field(seg, el, p.s - el.s_begin, ie);
      p.u_n = iv.u_n;
      p.u_t = iv.u_t;
      p.theta = iv.theta;
      const CouplingSite* sides[2] = {&a, &b};
      const Vec12* vals[2] = {&ua, &ub};
      for (int side = 0; side < 2; ++side) {
        const auto& tr = sides[side]->trace;
        const Vec2 jump = tr.points[q].jump * *vals[side];
        const Vec2 trac = tr.points[q].traction * *vals[side];
        p.jump_n[side] = tr.normal.dot(jump);
        p.jump_t[side] = tr.tangent.dot(jump);
        p.sigma_n[side] = tr.normal.dot(trac);
        p.sigma_t[side] = tr.tangent.dot(trac);
      }
      out.profile.push_back(p);
    }
  }
  return out;
}

std::vector<Vec2> deformed_segment(const Problem& problem, const DofMap& dofs, const Vector& values, int segment,
                                   double scale, int per_element) {
  const auto& seg = problem.interface.segments.at(static_cast<std::size_t>(segment));
  std::vector<Vec2> out;
  for (const auto& el : seg.elements) {
    Vec6 ie;
    for (int c = 0; c < 3; ++c) {
      ie[c] = values[dofs.interface(el.node_begin, c)];
      ie[3 + c] = values[dofs.interface(el.node_end, c)];
    }
    const int first = out.empty() ? 0 : 1;
    for (int k = first; k <= per_element; ++k) {
      const double sl = el.length() * k / per_element;
      const auto iv = evaluate_interface_field(seg, el, sl, ie);
      out.push_back(seg.point_at(el.s_begin + sl) + scale * iv.u);
    }
  }
  return out;
}

double strain_energy(const GlobalSystem& system, const Vector& values) {
  return 0.5 * values.dot(system.matrix * values);
}

}  // namespace nitsche
