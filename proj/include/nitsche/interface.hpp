#pragma once

#include <span>
#include <string>
#include <vector>

#include "nitsche/geometry.hpp"
#include "nitsche/mesh.hpp"

namespace nitsche {

struct LabeledPoint {
  std::string label;
  Vec2 position;
};

/// Input description of one straight interface segment.
/// `plus_side` is the subdomain the normal n points into; `minus_side` is the
/// subdomain whose outward normal is n. With t = (to - from)/|to - from| and n
/// the +90 degree rotation of t, the minus side lies to the right of from->to.
struct SegmentSpec {
  std::string from;
  std::string to;
  int plus_side = -1;
  int minus_side = -1;
  /// Target beam element length; <= 0 means one element for the segment.
  double element_size = 0.0;
};

/// One Hermite/linear beam element. Node indices refer to InterfaceNetwork::nodes.
struct BeamElement {
  int node_begin = -1;
  int node_end = -1;
  double s_begin = 0.0;
  double s_end = 0.0;

  [[nodiscard]] double length() const { return s_end - s_begin; }
};

struct InterfaceSegment {
  Vec2 start;
  Vec2 end;
  Vec2 tangent;
  Vec2 normal;
  double length = 0.0;
  int start_node = -1;
  int end_node = -1;
  int plus_side = -1;
  int minus_side = -1;
  std::vector<BeamElement> elements;

  [[nodiscard]] Vec2 point_at(double s) const { return start + s * tangent; }
  [[nodiscard]] double arclength_of(const Vec2& p) const { return (p - start).dot(tangent); }
  [[nodiscard]] double distance_to_line(const Vec2& p) const { return std::abs((p - start).dot(normal)); }
  /// Index of the element containing arclength s (clamped to the segment).
  [[nodiscard]] int element_at(double s) const;
  /// Outward normal of `subdomain` on this segment (+n for the minus side, -n for the plus side).
  [[nodiscard]] Vec2 outward_normal(int subdomain) const;
};

struct InterfaceNode {
  std::string label;
  Vec2 position;
  std::vector<int> incident_segments;
  bool is_junction = false;
};

struct InterfaceNetwork {
  std::vector<InterfaceSegment> segments;
  std::vector<InterfaceNode> nodes;

  /// Index of the node carrying `label`, -1 if absent.
  [[nodiscard]] int find_node(const std::string& label) const;
  /// Index of the node located at p (within tol), -1 if none.
  [[nodiscard]] int find_node(const Vec2& p, double tol) const;
  [[nodiscard]] int element_count() const;
};

/// A subdomain boundary used to check side assignments in build_interface.
struct SubdomainPolygon {
  int subdomain_id = -1;
  std::vector<Vec2> vertices;
};

/// Builds frames, shared nodes, junction flags and beam elements for a network
/// of straight segments. When `polygons` is non-empty each segment is checked
/// against the declared sides: it must lie on a boundary edge of both
/// subdomains, traversed from->to by the plus side and to->from by the minus
/// side (polygons are counterclockwise).
InterfaceNetwork build_interface(std::span<const LabeledPoint> points, std::span<const SegmentSpec> segments,
                                 std::span<const SubdomainPolygon> polygons = {});

}  // namespace nitsche
