#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "nitsche/geometry.hpp"

namespace nitsche {

/// A boundary edge of a triangulation. The edge joins local vertices
/// `local_edge` and `(local_edge + 1) % 3` of `triangle`; `tag` is the index of
/// the polygon edge it lies on (or -1 when unknown).
struct BoundaryEdge {
  int triangle = -1;
  int local_edge = -1;
  int tag = -1;

  friend bool operator==(const BoundaryEdge&, const BoundaryEdge&) = default;
};

/// Triangulation of one polygonal subdomain. Triangles are counterclockwise.
struct SubdomainMesh {
  int subdomain_id = 0;
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  [[nodiscard]] Triangle corners(int t) const {
    const auto& tri = triangles[t];
    return {nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]};
  }
  [[nodiscard]] std::pair<int, int> edge_nodes(const BoundaryEdge& e) const {
    const auto& tri = triangles[e.triangle];
    return {tri[e.local_edge], tri[(e.local_edge + 1) % 3]};
  }
  [[nodiscard]] double area(int t) const { return signed_area(corners(t)); }
  [[nodiscard]] double diameter(int t) const { return triangle_diameter(corners(t)); }
  [[nodiscard]] double max_diameter() const;
  [[nodiscard]] double bounding_diameter() const;
};

/// Checks the mesh invariants (positive areas, boundary edges owned by exactly
/// one triangle, no duplicate boundary edges). Throws GeometryError.
void validate_mesh(const SubdomainMesh& mesh);

/// Throws GeometryError unless `polygon` is simple, counterclockwise and free of
/// repeated or backtracking vertices.
void validate_polygon(std::span<const Vec2> polygon);

/// Constrained Delaunay triangulation of a simple counterclockwise polygon.
/// Every polygon vertex becomes a node, boundary edges are tagged with the
/// index of the polygon edge (vertex k to k+1) they lie on, and every triangle
/// has diameter at most 1.5 * target_h.
SubdomainMesh triangulate_subdomain(std::span<const Vec2> polygon, double target_h,
                                    int subdomain_id = 0);

/// Structured nx-by-ny split of an axis-aligned rectangle into right
/// triangles. Edge tags follow the polygon (lo, (hi.x, lo.y), hi, (lo.x, hi.y)):
/// 0 bottom, 1 right, 2 top, 3 left.
SubdomainMesh structured_rectangle(const Vec2& lo, const Vec2& hi, int nx, int ny,
                                   int subdomain_id = 0);

/// Recomputes boundary edges (edges owned by a single triangle) and tags each
/// one with the polygon edge that contains it, -1 if none does.
void retag_boundary(SubdomainMesh& mesh, std::span<const Vec2> polygon);

}  // namespace nitsche
