#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nitsche/beam.hpp"
#include "nitsche/coupling.hpp"
#include "nitsche/cut_partition.hpp"
#include "nitsche/elasticity.hpp"
#include "nitsche/interface.hpp"
#include "nitsche/mesh.hpp"

namespace nitsche {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

struct CouplingParams {
  CouplingMode mode = CouplingMode::Hybrid;
  /// gamma0 of side i is gamma0_factor * (lambda_i + mu_i) unless gamma0 is set.
  double gamma0_factor = 20.0;
  std::optional<double> gamma0;
  double alpha = 0.0;
  double beta = 0.0;
};

const char* mode_name(CouplingMode mode);
/// Parses "hybrid", "strong", "cohesive", "contact" (case-sensitive); throws InputError.
CouplingMode parse_mode(const std::string& name);

struct InterfaceLoad {
  std::function<double(double)> f_n;  ///< of segment arclength
  std::function<double(double)> f_t;
};

struct Constraint {
  int dof = -1;
  double value = 0.0;
};

/// A fully specified discrete problem. Meshes are addressed by index; the
/// interface refers to subdomains by SubdomainMesh::subdomain_id.
struct Problem {
  std::vector<SubdomainMesh> meshes;
  std::vector<Material> materials;             ///< per mesh
  std::vector<Vec2> body_forces;               ///< per mesh, constant
  /// Optional spatially varying body force per mesh (overrides body_forces),
  /// integrated with a 3-point edge-midpoint rule.
  std::vector<std::function<Vec2(const Vec2&)>> body_force_fields;
  InterfaceNetwork interface;
  std::vector<SectionProperties> sections;     ///< per segment
  std::vector<InterfaceLoad> interface_loads;  ///< per segment (may be empty)
  CouplingParams coupling;
  std::vector<Constraint> constraints;
  CutPartition cuts;  ///< filled by prepare_cuts

  [[nodiscard]] int mesh_index(int subdomain_id) const;
};

/// Builds the cut partition of every interface segment.
void prepare_cuts(Problem& problem);

struct DofMap {
  std::vector<int> bulk_offset;  ///< per mesh; 2 DOFs per node
  int interface_offset = 0;      ///< 3 DOFs per interface node (u_x, u_y, theta)
  int size = 0;

  [[nodiscard]] int bulk(int mesh, int node, int component) const { return bulk_offset[mesh] + 2 * node + component; }
  [[nodiscard]] int interface(int node, int component) const { return interface_offset + 3 * node + component; }
};

DofMap make_dof_map(const Problem& problem);

/// Constraints fixing both components of every node on boundary edges of
/// mesh `mesh` carrying `tag`, using value(x) as prescribed displacement.
std::vector<Constraint> clamp_boundary(const Problem& problem, const DofMap& dofs, int mesh, int tag,
                                       const std::function<Vec2(const Vec2&)>& value = {});
/// Constraints on interface node `node`: (u_x, u_y) = value and, if requested, theta = 0.
std::vector<Constraint> clamp_interface_node(const DofMap& dofs, int node, bool rotation, const Vec2& value = Vec2::Zero());

/// One (sub-segment, side) pair with its trace data and global DOF numbers.
struct CouplingSite {
  int segment = -1;
  int piece = -1;
  int side = 0;  ///< 0: minus side (outward normal +n), 1: plus side
  int mesh = -1;
  int triangle = -1;
  SideTrace trace;
  SideParams params;
  std::array<int, 12> dofs{};
};

struct GlobalSystem {
  DofMap dofs;
  SparseMatrix matrix;  ///< linear part, full symmetric storage
  Vector rhs;
  std::vector<CouplingSite> sites;
  CouplingMode mode = CouplingMode::Hybrid;
};

/// Bulk + interface + (linear) coupling assembly. In Contact mode only the
/// tangential cohesive terms are included; the normal terms are added by
/// solve_contact.
GlobalSystem assemble(const Problem& problem);

struct ReducedSystem {
  SparseMatrix matrix;
  Vector rhs;
  std::vector<int> free_dofs;  ///< reduced index -> global index
  Vector prescribed;           ///< full-length vector holding constrained values (0 elsewhere)
  std::vector<bool> constrained;
};

/// Symmetric elimination. Throws InputError for an out-of-range DOF or two
/// different values on the same DOF.
ReducedSystem apply_dirichlet(const SparseMatrix& matrix, const Vector& rhs, const std::vector<Constraint>& constraints);

/// Sparse Cholesky solve. Throws SolverError when the matrix is not positive
/// definite or the residual check ||Kx - b|| <= 1e-10 (||K|| ||x|| + ||b||) fails.
Vector solve_spd(const SparseMatrix& matrix, const Vector& rhs);

struct SolveDiagnostics {
  int newton_iterations = 0;
  std::vector<double> residual_history;
  std::vector<int> active_history;
  bool converged = true;
};

struct Solution {
  Vector values;  ///< full DOF vector
  SolveDiagnostics diagnostics;
};

Solution solve_linear(const GlobalSystem& system, const std::vector<Constraint>& constraints);

struct NewtonOptions {
  double tolerance = 1e-10;
  int max_iterations = 50;
};

/// Semismooth Newton for Contact mode. The default initial guess is the
/// solution with every quadrature point on the cohesive branch.
Solution solve_contact(const GlobalSystem& system, const std::vector<Constraint>& constraints,
                       const std::optional<Vector>& initial_guess = std::nullopt, const NewtonOptions& options = {});

/// Contact terms (residual and tangent) of every site at state u, added to
/// the linear part: returns (K u - F + r_c(u), K + J_c(u)) and the active count.
struct ContactLinearization {
  Vector residual;
  SparseMatrix jacobian;
  int active = 0;
  std::vector<ContactState> states;
};
ContactLinearization linearize_contact(const GlobalSystem& system, const Vector& u);

/// assemble + dispatch on the coupling mode.
Solution solve(const Problem& problem, const GlobalSystem& system);
Solution solve(const Problem& problem);

/// Local 12-vector of a site.
Vec12 gather(const CouplingSite& site, const Vector& u);

struct ProfileSample {
  int segment = -1;
  double s = 0.0;
  double u_n = 0.0;
  double u_t = 0.0;
  double theta = 0.0;
  std::array<double, 2> jump_n{};  ///< side 1 (minus), side 2 (plus)
  std::array<double, 2> jump_t{};
  std::array<double, 2> sigma_n{};
  std::array<double, 2> sigma_t{};
};

struct PostProcessed {
  std::vector<std::vector<Vec2>> displacement;  ///< per mesh, per node
  std::vector<std::vector<Vec2>> deformed;      ///< node + scale * displacement
  std::vector<std::vector<Stress2>> stress;     ///< per mesh, per triangle
  std::vector<Vec2> interface_displacement;     ///< per interface node
  std::vector<double> interface_rotation;
  std::vector<ProfileSample> profile;           ///< at the coupling quadrature points
};

PostProcessed postprocess(const Problem& problem, const GlobalSystem& system, const Solution& solution,
                          double scale = 1.0);

/// Deformed interface polyline of a segment sampled `per_element` times per beam element.
std::vector<Vec2> deformed_segment(const Problem& problem, const DofMap& dofs, const Vector& values, int segment,
                                   double scale, int per_element = 8);

/// 0.5 u^T K u with the linear part of the system.
double strain_energy(const GlobalSystem& system, const Vector& values);

}  // namespace nitsche
