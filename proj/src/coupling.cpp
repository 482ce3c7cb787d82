#include "nitsche/coupling.hpp"

#include <sstream>

#include "nitsche/errors.hpp"
#include "nitsche/quadrature.hpp"

namespace nitsche {

double tau_stabilization(double h, double gamma0, double compliance) {
  if (!(h > 0.0) || !(gamma0 > 0.0)) throw InputError("tau_stabilization: h and gamma0 must be positive");
  if (compliance < 0.0) throw InputError("tau_stabilization: compliance must be non-negative");
  return 1.0 / (h / gamma0 + compliance);
}

double nitsche_epsilon(double h, double gamma0, double alpha) {
  if (!(alpha > 0.0)) throw InputError("contact coupling requires alpha > 0");
  if (!(h > 0.0) || !(gamma0 > 0.0)) throw InputError("nitsche_epsilon: h and gamma0 must be positive");
  return 1.0 / (gamma0 / h + 1.0 / alpha);
}

SideTrace make_side_trace(const InterfaceSegment& segment, const BeamElement& element, double s_begin,
                          double s_end, const Triangle& triangle, const Material& material,
                          const Vec2& outward_normal) {
  SideTrace trace;
  trace.normal = outward_normal;
  trace.tangent = rotate_cw(outward_normal);
  trace.h = triangle_diameter(triangle);
  const double L = element.length();
  const double len = s_end - s_begin;
  if (!(len > 0.0)) throw GeometryError("empty interface sub-segment");

  Eigen::Matrix<double, 2, 12> traction = Eigen::Matrix<double, 2, 12>::Zero();
  traction.leftCols<6>() = traction_matrix(triangle, material, outward_normal);

  const auto& rule = gauss4();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    auto& tp = trace.points[q];
    tp.s = s_begin + rule[q].x * len;
    tp.weight = rule[q].w * len;
    const Vec2 x = segment.point_at(tp.s);
    tp.jump.leftCols<6>() = p1_values(triangle, x);
    tp.jump.rightCols<6>() = -interface_basis(segment.normal, segment.tangent, (tp.s - element.s_begin) / L, L);
    tp.traction = traction;
  }
  return trace;
}

Mat12 hybrid_block(const SideTrace& trace, double gamma0) {
  const double gamma = gamma0 / trace.h;
  Mat12 k = Mat12::Zero();
  for (const auto& p : trace.points) {
    const Eigen::Matrix<double, 12, 12> st = p.traction.transpose() * p.jump;
    k += p.weight * (gamma * p.jump.transpose() * p.jump - st - st.transpose());
  }
  return k;
}

Mat12 cohesive_component(const SideTrace& trace, const Vec2& c, double gamma0, double a) {
  const double eta = trace.h / gamma0;
  const double tau = tau_stabilization(trace.h, gamma0, a);
  Mat12 k = Mat12::Zero();
  for (const auto& p : trace.points) {
    const Row12 s = c.transpose() * p.traction;
    const Row12 j = c.transpose() * p.jump;
    const Mat12 sj = s.transpose() * j;
    k += p.weight * (-a * eta * tau * s.transpose() * s - eta * tau * (sj + sj.transpose()) + tau * j.transpose() * j);
  }
  return k;
}

Mat12 cohesive_block(const SideTrace& trace, const SideParams& params) {
  return cohesive_component(trace, trace.normal, params.gamma0, params.alpha) +
         cohesive_component(trace, trace.tangent, params.gamma0, params.beta);
}

int ContactState::active_count() const {
  int n = 0;
  for (const auto& p : points) n += p.active ? 1 : 0;
  return n;
}

ContactEvaluation contact_residual(const SideTrace& trace, const Vec12& u, double gamma0, double alpha) {
  const double eps = nitsche_epsilon(trace.h, gamma0, alpha);
  ContactEvaluation out;
  out.residual.setZero();
  for (std::size_t q = 0; q < trace.points.size(); ++q) {
    const auto& p = trace.points[q];
    const Row12 j = trace.normal.transpose() * p.jump;
    const Row12 s = trace.normal.transpose() * p.traction;
    const Row12 pv = s + j / alpha;
    auto& st = out.state.points[q];
    st.jump_n = j.dot(u);
    st.sigma_n = s.dot(u);
    st.multiplier = st.sigma_n + st.jump_n / alpha;
    st.gap = st.jump_n - eps * st.multiplier;
    st.epsilon = eps;
    st.active = st.gap > 0.0;
    out.residual += p.weight * ((st.jump_n / alpha) * j.transpose() + (plus_part(st.gap) / eps) * (j - eps * pv).transpose() -
                                (eps * st.multiplier) * pv.transpose());
  }
  return out;
}

Mat12 contact_jacobian(const SideTrace& trace, const ContactState& state, double gamma0, double alpha) {
  // Closed forms of the two branches; expanding the plus-part expression
  // directly loses digits when alpha is small.
  const double eta = trace.h / gamma0;
  const double tau = tau_stabilization(trace.h, gamma0, alpha);
  Mat12 k = Mat12::Zero();
  for (std::size_t q = 0; q < trace.points.size(); ++q) {
    const auto& p = trace.points[q];
    const Row12 j = trace.normal.transpose() * p.jump;
    const Row12 s = trace.normal.transpose() * p.traction;
    const Mat12 sj = s.transpose() * j;
    if (state.points[q].active) {
      k += p.weight * (j.transpose() * j / eta - sj - sj.transpose());
    } else {
      k += p.weight * (-alpha * eta * tau * s.transpose() * s - eta * tau * (sj + sj.transpose()) + tau * j.transpose() * j);
    }
  }
  return k;
}

}  // namespace nitsche
