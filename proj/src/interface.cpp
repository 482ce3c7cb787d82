#include "nitsche/interface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nitsche/errors.hpp"

namespace nitsche {

int InterfaceSegment::element_at(double s) const {
  const auto it = std::upper_bound(elements.begin(), elements.end(), s,
                                   [](double v, const BeamElement& e) { return v < e.s_end; });
  if (it == elements.end()) return static_cast<int>(elements.size()) - 1;
  return static_cast<int>(it - elements.begin());
}

Vec2 InterfaceSegment::outward_normal(int subdomain) const {
  if (subdomain == minus_side) return normal;
  if (subdomain == plus_side) return -normal;
  throw GeometryError("subdomain is not adjacent to this interface segment");
}

int InterfaceNetwork::find_node(const std::string& label) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

int InterfaceNetwork::find_node(const Vec2& p, double tol) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if ((nodes[i].position - p).norm() <= tol) return static_cast<int>(i);
  }
  return -1;
}

int InterfaceNetwork::element_count() const {
  int n = 0;
  for (const auto& s : segments) n += static_cast<int>(s.elements.size());
  return n;
}

namespace {

/// Does the directed boundary of `poly` contain [a, b] on one of its edges, and
/// in which direction (+1 same as a->b, -1 opposite, 0 not found)?
int boundary_direction(const SubdomainPolygon& poly, const Vec2& a, const Vec2& b, double tol) {
  const std::size_t n = poly.vertices.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2& p = poly.vertices[k];
    const Vec2& q = poly.vertices[(k + 1) % n];
    if (point_segment_distance(a, p, q) <= tol && point_segment_distance(b, p, q) <= tol) {
      return (q - p).dot(b - a) > 0.0 ? 1 : -1;
    }
  }
  return 0;
}

}  // namespace

InterfaceNetwork build_interface(std::span<const LabeledPoint> points, std::span<const SegmentSpec> segments,
                                 std::span<const SubdomainPolygon> polygons) {
  InterfaceNetwork net;
  double extent = 0.0;
  for (const auto& p : points) extent = std::max(extent, p.position.norm());
  for (const auto& p : points) {
    if (net.find_node(p.label) >= 0) throw GeometryError("duplicate interface point label '" + p.label + "'");
    net.nodes.push_back({p.label, p.position, {}, false});
  }
  // Endpoint nodes come first; interior element nodes are appended per segment.
  const int labelled = static_cast<int>(net.nodes.size());

  for (std::size_t si = 0; si < segments.size(); ++si) {
    const auto& spec = segments[si];
    const int a = net.find_node(spec.from);
    const int b = net.find_node(spec.to);
    if (a < 0 || b < 0) {
      throw GeometryError("segment " + std::to_string(si) + " references an unknown point");
    }
    InterfaceSegment seg;
    seg.start = net.nodes[a].position;
    seg.end = net.nodes[b].position;
    seg.length = (seg.end - seg.start).norm();
    if (!(seg.length > 1e-12 * std::max(extent, 1.0))) {
      throw GeometryError("segment " + spec.from + spec.to + " has zero length");
    }
    seg.tangent = (seg.end - seg.start) / seg.length;
    seg.normal = rotate_ccw(seg.tangent);
    seg.start_node = a;
    seg.end_node = b;
    seg.plus_side = spec.plus_side;
    seg.minus_side = spec.minus_side;
    if (spec.plus_side < 0 || spec.minus_side < 0 || spec.plus_side == spec.minus_side) {
      throw GeometryError("segment " + spec.from + spec.to + " must border two distinct subdomains");
    }

    if (!polygons.empty()) {
      const double tol = 1e-9 * std::max(seg.length, 1.0);
      for (const auto& [side, expected] : {std::pair{spec.plus_side, 1}, std::pair{spec.minus_side, -1}}) {
        const auto it = std::find_if(polygons.begin(), polygons.end(),
                                     [side](const SubdomainPolygon& p) { return p.subdomain_id == side; });
        if (it == polygons.end()) {
          throw GeometryError("segment " + spec.from + spec.to + " refers to undeclared subdomain " +
                              std::to_string(side));
        }
        const int dir = boundary_direction(*it, seg.start, seg.end, tol);
        if (dir != expected) {
          std::ostringstream os;
          os << "segment " << spec.from << spec.to << ": side assignment inconsistent with geometry (subdomain "
             << side << (dir == 0 ? " does not border it)" : " lies on the other side)");
          throw GeometryError(os.str());
        }
      }
    }

    const int pieces = spec.element_size > 0.0
                           ? std::max(1, static_cast<int>(std::ceil(seg.length / spec.element_size - 1e-9)))
                           : 1;
    int prev = a;
    for (int k = 0; k < pieces; ++k) {
      int next = b;
      if (k + 1 < pieces) {
        next = static_cast<int>(net.nodes.size());
        const double s = seg.length * (k + 1) / pieces;
        net.nodes.push_back({spec.from + spec.to + "#" + std::to_string(k + 1), seg.point_at(s), {}, false});
      }
      BeamElement e;
      e.node_begin = prev;
      e.node_end = next;
      e.s_begin = seg.length * k / pieces;
      e.s_end = (k + 1 == pieces) ? seg.length : seg.length * (k + 1) / pieces;
      seg.elements.push_back(e);
      prev = next;
    }
    net.nodes[a].incident_segments.push_back(static_cast<int>(si));
    net.nodes[b].incident_segments.push_back(static_cast<int>(si));
    for (std::size_t k = 1; k < seg.elements.size(); ++k) {
      net.nodes[seg.elements[k].node_begin].incident_segments.push_back(static_cast<int>(si));
    }
    net.segments.push_back(std::move(seg));
  }

  for (int i = 0; i < labelled; ++i) {
    auto& node = net.nodes[i];
    const auto& inc = node.incident_segments;
    if (inc.size() >= 3) {
      node.is_junction = true;
    } else if (inc.size() == 2) {
      const Vec2 t0 = net.segments[inc[0]].tangent;
      const Vec2 t1 = net.segments[inc[1]].tangent;
      node.is_junction = std::abs(cross(t0, t1)) > 1e-9;
    }
  }
  return net;
}

}  // namespace nitsche
