#pragma once

#include <Eigen/Core>
#include <array>

#include "nitsche/beam.hpp"
#include "nitsche/cut_partition.hpp"
#include "nitsche/elasticity.hpp"
#include "nitsche/interface.hpp"

namespace nitsche {

using Mat12 = Eigen::Matrix<double, 12, 12>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Row12 = Eigen::Matrix<double, 1, 12>;

enum class CouplingMode { Hybrid, StrongStiffness, Cohesive, Contact };

struct SideParams {
  double gamma0 = 1.0;  ///< penalty numerator; gamma_i = gamma0 / h_i
  double alpha = 0.0;   ///< normal compliance
  double beta = 0.0;    ///< tangential compliance
};

inline double plus_part(double x) { return x > 0.0 ? x : 0.0; }

/// 1 / (h / gamma0 + compliance): tau_n with the normal compliance, tau_t with the tangential one.
double tau_stabilization(double h, double gamma0, double compliance);

/// epsilon with 1/epsilon = gamma0 / h + 1 / alpha. Requires alpha > 0.
double nitsche_epsilon(double h, double gamma0, double alpha);

/// Linearized quantities at one quadrature point of a sub-segment, over the
/// 12 local DOFs (u_x, u_y of the 3 triangle nodes, then the 6 Cartesian DOFs
/// of the beam element).
struct TracePoint {
  double weight = 0.0;  ///< Gauss weight times sub-segment length
  double s = 0.0;       ///< segment arclength
  Eigen::Matrix<double, 2, 12> jump;      ///< u_i - u_Gamma
  Eigen::Matrix<double, 2, 12> traction;  ///< sigma(u_i) . n_i
};

/// Everything one side contributes on one sub-segment.
struct SideTrace {
  Vec2 normal;   ///< outward normal n_i of the side
  Vec2 tangent;  ///< t_i, the -90 degree rotation of n_i
  double h = 0.0;
  std::array<TracePoint, 4> points;
};

/// Trace data for the side owning `triangle` on sub-segment [s_begin, s_end] of
/// beam element `element`.
SideTrace make_side_trace(const InterfaceSegment& segment, const BeamElement& element, double s_begin,
                          double s_end, const Triangle& triangle, const Material& material,
                          const Vec2& outward_normal);

/// -(sigma(u).n, v - v_G) - (u - u_G, sigma(v).n) + (gamma0/h (u - u_G), v - v_G).
Mat12 hybrid_block(const SideTrace& trace, double gamma0);

/// Symmetric stabilized cohesive form with C = alpha n n + beta t t and
/// tau from tau_stabilization; alpha = beta = 0 reproduces hybrid_block.
Mat12 cohesive_block(const SideTrace& trace, const SideParams& params);

/// One component of the cohesive form (direction c, compliance a): with
/// s = c.sigma(u).n, j = c.(u - u_G), eta = h/gamma0 and tau = 1/(eta + a),
/// the four terms collapse to -a eta tau s s - eta tau (s j + j s) + tau j j.
Mat12 cohesive_component(const SideTrace& trace, const Vec2& direction, double gamma0, double compliance);

struct ContactPoint {
  bool active = false;
  double jump_n = 0.0;      ///< n_i . (u_i - u_G)
  double sigma_n = 0.0;     ///< n . sigma(u_i) . n
  double multiplier = 0.0;  ///< p = sigma_n + jump_n / alpha
  double gap = 0.0;         ///< jump_n - epsilon p; active iff gap > 0
  double epsilon = 0.0;
};

struct ContactState {
  std::array<ContactPoint, 4> points;

  [[nodiscard]] int active_count() const;
};

struct ContactEvaluation {
  Vec12 residual;
  ContactState state;
};

/// Normal contact terms at the local state u:
///   (jump_n/alpha, [v]_n) + (plus_part(g)/epsilon, [v]_n - epsilon p(v)) - (epsilon p, p(v)).
/// Throws InputError for alpha <= 0.
ContactEvaluation contact_residual(const SideTrace& trace, const Vec12& u, double gamma0, double alpha);

/// Generalized derivative of contact_residual: the active branch gives the
/// normal Nitsche component with penalty gamma0/h, the inactive branch the
/// normal cohesive component with penalty tau_n.
Mat12 contact_jacobian(const SideTrace& trace, const ContactState& state, double gamma0, double alpha);

}  // namespace nitsche
