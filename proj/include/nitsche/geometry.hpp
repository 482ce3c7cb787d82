#pragma once

#include <Eigen/Core>
#include <array>
#include <span>
#include <vector>

namespace nitsche {

using Vec2 = Eigen::Vector2d;
using Triangle = std::array<Vec2, 3>;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Twice the signed area of (a, b, c); positive when counterclockwise.
inline double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

/// Rotation by +90 degrees.
inline Vec2 rotate_ccw(const Vec2& v) { return {-v.y(), v.x()}; }
/// Rotation by -90 degrees.
inline Vec2 rotate_cw(const Vec2& v) { return {v.y(), -v.x()}; }

inline double signed_area(const Triangle& t) { return 0.5 * orient(t[0], t[1], t[2]); }

double triangle_diameter(const Triangle& t);

/// Signed area of a closed polygon (positive when counterclockwise).
double polygon_area(std::span<const Vec2> polygon);

/// Largest distance between two polygon vertices.
double polygon_diameter(std::span<const Vec2> polygon);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// Even-odd point-in-polygon test (boundary points give an unspecified answer).
bool point_in_polygon(const Vec2& p, std::span<const Vec2> polygon);

/// Barycentric coordinates of p with respect to t.
Eigen::Vector3d barycentric(const Triangle& t, const Vec2& p);

/// True when the closed segments [a,b] and [c,d] intersect.
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double tol);

}  // namespace nitsche
