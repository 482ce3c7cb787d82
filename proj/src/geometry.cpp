#include "nitsche/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace nitsche {

double triangle_diameter(const Triangle& t) {
  return std::max({(t[0] - t[1]).norm(), (t[1] - t[2]).norm(), (t[2] - t[0]).norm()});
}

double polygon_area(std::span<const Vec2> polygon) {
  double a = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    a += cross(polygon[i], polygon[(i + 1) % polygon.size()]);
  }
  return 0.5 * a;
}

double polygon_diameter(std::span<const Vec2> polygon) {
  double d = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    for (std::size_t j = i + 1; j < polygon.size(); ++j) {
      d = std::max(d, (polygon[i] - polygon[j]).norm());
    }
  }
  return d;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

bool point_in_polygon(const Vec2& p, std::span<const Vec2> polygon) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

Eigen::Vector3d barycentric(const Triangle& t, const Vec2& p) {
  const double area2 = orient(t[0], t[1], t[2]);
  return {orient(p, t[1], t[2]) / area2, orient(t[0], p, t[2]) / area2,
          orient(t[0], t[1], p) / area2};
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double tol) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  const double scale = std::max((b - a).norm(), (d - c).norm());
  const double eps = tol * scale * scale;
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
      ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))) {
    return true;
  }
  const double dist_tol = tol * scale;
  return point_segment_distance(a, c, d) <= dist_tol || point_segment_distance(b, c, d) <= dist_tol ||
         point_segment_distance(c, a, b) <= dist_tol || point_segment_distance(d, a, b) <= dist_tol;
}

}  // namespace nitsche
