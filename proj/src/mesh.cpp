#include "nitsche/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "nitsche/errors.hpp"

namespace nitsche {

namespace {

constexpr double kRelTol = 1e-12;

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

int third_vertex(const std::array<int, 3>& tri, int a, int b) {
  for (int v : tri) {
    if (v != a && v != b) return v;
  }
  return -1;
}

/// Incremental constrained Delaunay triangulation. Constrained edges are the
/// polygon boundary; they are never flipped and only ever split at midpoints.
class Cdt {
 public:
  explicit Cdt(double scale) : scale_(scale) {}

  std::vector<Vec2> pts;
  std::vector<std::array<int, 3>> tris;

  void set_boundary(std::span<const Vec2> ring, std::span<const int> tags) {
    pts.assign(ring.begin(), ring.end());
    const int n = static_cast<int>(ring.size());
    for (int i = 0; i < n; ++i) constrained_[edge_key(i, (i + 1) % n)] = tags[i];
    ear_clip(n);
    std::vector<std::pair<int, int>> stack;
    for (const auto& t : tris) {
      for (int k = 0; k < 3; ++k) stack.emplace_back(t[k], t[(k + 1) % 3]);
    }
    flip_edges(std::move(stack));
  }

  void insert(const Vec2& p) {
    const auto [t, e] = locate(p);
    if (t < 0) return;
    const int m = static_cast<int>(pts.size());
    pts.push_back(p);
    if (e < 0) {
      split_triangle(t, m);
    } else {
      split_edge(t, e, m);
    }
  }

  /// Longest-edge bisection until every triangle has diameter <= limit.
  void refine(double limit) {
    for (int pass = 0; pass < 200; ++pass) {
      std::vector<std::pair<int, int>> bad;
      for (const auto& t : tris) {
        const Triangle c{pts[t[0]], pts[t[1]], pts[t[2]]};
        if (triangle_diameter(c) <= limit) continue;
        int best = 0;
        double len = 0.0;
        for (int k = 0; k < 3; ++k) {
          const double l = (c[k] - c[(k + 1) % 3]).norm();
          if (l > len) {
            len = l;
            best = k;
          }
        }
        bad.emplace_back(t[best], t[(best + 1) % 3]);
      }
      if (bad.empty()) return;
      for (const auto& [a, b] : bad) {
        const auto it = owners_.find(edge_key(a, b));
        if (it == owners_.end()) continue;
        const int t = it->second[0] >= 0 ? it->second[0] : it->second[1];
        const auto& tri = tris[t];
        int e = 0;
        while (!((tri[e] == a && tri[(e + 1) % 3] == b) || (tri[e] == b && tri[(e + 1) % 3] == a))) ++e;
        const int m = static_cast<int>(pts.size());
        pts.push_back(0.5 * (pts[a] + pts[b]));
        split_edge(t, e, m);
      }
    }
    throw GeometryError("mesh refinement did not terminate");
  }

  std::vector<BoundaryEdge> boundary_edges() const {
    std::vector<BoundaryEdge> out;
    for (const auto& [key, tag] : constrained_) {
      const auto& o = owners_.at(key);
      const int t = o[0] >= 0 ? o[0] : o[1];
      const int a = static_cast<int>(key >> 32);
      const int b = static_cast<int>(key & 0xffffffffu);
      for (int k = 0; k < 3; ++k) {
        const int u = tris[t][k];
        const int v = tris[t][(k + 1) % 3];
        if ((u == a && v == b) || (u == b && v == a)) out.push_back({t, k, tag});
      }
    }
    std::sort(out.begin(), out.end(), [](const BoundaryEdge& x, const BoundaryEdge& y) {
      return std::tie(x.tag, x.triangle, x.local_edge) < std::tie(y.tag, y.triangle, y.local_edge);
    });
    return out;
  }

 private:
  double scale_;
  std::unordered_map<std::uint64_t, std::array<int, 2>> owners_;
  std::map<std::uint64_t, int> constrained_;

  [[nodiscard]] double area_eps() const { return kRelTol * scale_ * scale_; }

  void attach(int t) {
    for (int k = 0; k < 3; ++k) {
      auto [it, inserted] =
          owners_.try_emplace(edge_key(tris[t][k], tris[t][(k + 1) % 3]), std::array<int, 2>{-1, -1});
      auto& o = it->second;
      if (o[0] < 0) {
        o[0] = t;
      } else if (o[1] < 0) {
        o[1] = t;
      } else {
        throw GeometryError("triangulation produced a non-manifold edge");
      }
    }
  }

  void detach(int t) {
    for (int k = 0; k < 3; ++k) {
      const auto it = owners_.find(edge_key(tris[t][k], tris[t][(k + 1) % 3]));
      auto& o = it->second;
      if (o[0] == t) {
        o[0] = -1;
      } else if (o[1] == t) {
        o[1] = -1;
      }
      if (o[0] < 0 && o[1] < 0) owners_.erase(it);
    }
  }

  int add(const std::array<int, 3>& v) {
    tris.push_back(v);
    const int t = static_cast<int>(tris.size()) - 1;
    attach(t);
    return t;
  }

  int neighbor(int t, int a, int b) const {
    const auto& o = owners_.at(edge_key(a, b));
    return o[0] == t ? o[1] : o[0];
  }

  bool in_circle(int a, int b, int c, int d) const {
    const Vec2 pa = pts[a] - pts[d];
    const Vec2 pb = pts[b] - pts[d];
    const Vec2 pc = pts[c] - pts[d];
    const double det = pa.squaredNorm() * cross(pb, pc) - pb.squaredNorm() * cross(pa, pc) +
                       pc.squaredNorm() * cross(pa, pb);
    const double l = std::max({pa.norm(), pb.norm(), pc.norm()});
    return det > 1e-10 * l * l * l * l;
  }

  void ear_clip(int n) {
    std::vector<int> ring(n);
    std::iota(ring.begin(), ring.end(), 0);
    std::size_t start = 0;
    while (ring.size() > 3) {
      bool clipped = false;
      const std::size_t m = ring.size();
      for (std::size_t step = 0; step < m && !clipped; ++step) {
        const std::size_t i = (start + step) % m;
        const int prev = ring[(i + m - 1) % m];
        const int cur = ring[i];
        const int next = ring[(i + 1) % m];
        if (orient(pts[prev], pts[cur], pts[next]) <= area_eps()) continue;
        bool empty = true;
        for (int other : ring) {
          if (other == prev || other == cur || other == next) continue;
          const Vec2& o = pts[other];
          if (orient(pts[prev], pts[cur], o) >= -area_eps() && orient(pts[cur], pts[next], o) >= -area_eps() &&
              orient(pts[next], pts[prev], o) >= -area_eps()) {
            empty = false;
            break;
          }
        }
        if (!empty) continue;
        add({prev, cur, next});
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        start = i % ring.size();
        clipped = true;
      }
      if (!clipped) throw GeometryError("ear clipping failed: polygon is not simple");
    }
    add({ring[0], ring[1], ring[2]});
  }

  void flip_edges(std::vector<std::pair<int, int>> stack) {
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      const std::uint64_t key = edge_key(a, b);
      if (constrained_.contains(key)) continue;
      const auto it = owners_.find(key);
      if (it == owners_.end() || it->second[0] < 0 || it->second[1] < 0) continue;
      int t = it->second[0];
      int u = it->second[1];
      // Orient so that t traverses a -> b counterclockwise.
      const auto& tt = tris[t];
      const int ia = static_cast<int>(std::find(tt.begin(), tt.end(), a) - tt.begin());
      if (tt[(ia + 1) % 3] != b) std::swap(t, u);
      const int p = third_vertex(tris[t], a, b);
      const int q = third_vertex(tris[u], a, b);
      if (!in_circle(a, b, p, q)) continue;
      if (orient(pts[a], pts[q], pts[p]) <= area_eps() || orient(pts[q], pts[b], pts[p]) <= area_eps()) continue;
      detach(t);
      detach(u);
      tris[t] = {a, q, p};
      tris[u] = {q, b, p};
      attach(t);
      attach(u);
      stack.emplace_back(a, q);
      stack.emplace_back(q, b);
      stack.emplace_back(b, p);
      stack.emplace_back(p, a);
    }
  }

  std::pair<int, int> locate(const Vec2& p) const {
    const double tol = 1e-10;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      const Triangle c{pts[tris[t][0]], pts[tris[t][1]], pts[tris[t][2]]};
      const Eigen::Vector3d l = barycentric(c, p);
      if (l.minCoeff() < -tol) continue;
      for (int j = 0; j < 3; ++j) {
        // Near-zero weight of vertex j: p lies on the opposite edge (j+1, j+2).
        if (l[j] < tol) return {t, (j + 1) % 3};
      }
      return {t, -1};
    }
    return {-1, -1};
  }

  void split_triangle(int t, int m) {
    const auto [a, b, c] = tris[t];
    detach(t);
    tris[t] = {a, b, m};
    attach(t);
    add({b, c, m});
    add({c, a, m});
    flip_edges({{a, b}, {b, c}, {c, a}});
  }

  void split_edge(int t, int e, int m) {
    const int a = tris[t][e];
    const int b = tris[t][(e + 1) % 3];
    const int c = tris[t][(e + 2) % 3];
    const int u = neighbor(t, a, b);
    const std::uint64_t key = edge_key(a, b);
    std::vector<std::pair<int, int>> stack{{c, a}, {b, c}};
    if (u >= 0) {
      const int d = third_vertex(tris[u], a, b);
      detach(t);
      detach(u);
      tris[t] = {a, m, c};
      tris[u] = {m, b, c};
      attach(t);
      attach(u);
      add({b, m, d});
      add({m, a, d});
      stack.emplace_back(d, b);
      stack.emplace_back(a, d);
    } else {
      detach(t);
      tris[t] = {a, m, c};
      attach(t);
      add({m, b, c});
    }
    if (const auto it = constrained_.find(key); it != constrained_.end()) {
      const int tag = it->second;
      constrained_.erase(it);
      constrained_[edge_key(a, m)] = tag;
      constrained_[edge_key(m, b)] = tag;
    }
    flip_edges(std::move(stack));
  }
};

}  // namespace

double SubdomainMesh::max_diameter() const {
  double d = 0.0;
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t) d = std::max(d, diameter(t));
  return d;
}

double SubdomainMesh::bounding_diameter() const {
  if (nodes.empty()) return 0.0;
  Vec2 lo = nodes.front();
  Vec2 hi = nodes.front();
  for (const auto& p : nodes) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

void validate_polygon(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) throw GeometryError("polygon needs at least 3 vertices");
  const double diam = polygon_diameter(polygon);
  if (!(diam > 0.0)) throw GeometryError("polygon is degenerate (zero extent)");
  const double tol = kRelTol * diam;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& prev = polygon[(i + n - 1) % n];
    const Vec2& cur = polygon[i];
    const Vec2& next = polygon[(i + 1) % n];
    if ((next - cur).norm() <= tol) {
      std::ostringstream os;
      os << "polygon vertices " << i << " and " << (i + 1) % n << " coincide";
      throw GeometryError(os.str());
    }
    const Vec2 u = prev - cur;
    const Vec2 v = next - cur;
    if (std::abs(cross(u, v)) <= tol * diam && u.dot(v) > 0.0) {
      std::ostringstream os;
      os << "polygon vertex " << i << " folds back onto its neighbours";
      throw GeometryError(os.str());
    }
  }
  if (polygon_area(polygon) <= tol * diam) {
    throw GeometryError("polygon must be counterclockwise with positive area");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(polygon[i], polygon[(i + 1) % n], polygon[j], polygon[(j + 1) % n], 1e-12)) {
        std::ostringstream os;
        os << "polygon edges " << i << " and " << j << " intersect";
        throw GeometryError(os.str());
      }
    }
  }
}

SubdomainMesh triangulate_subdomain(std::span<const Vec2> polygon, double target_h, int subdomain_id) {
  if (!(target_h > 0.0)) throw InputError("target_h must be positive");
  validate_polygon(polygon);
  const double diam = polygon_diameter(polygon);

  // Subdivide every polygon edge into pieces no longer than target_h.
  std::vector<Vec2> ring;
  std::vector<int> tags;
  const int n = static_cast<int>(polygon.size());
  for (int k = 0; k < n; ++k) {
    const Vec2& a = polygon[k];
    const Vec2& b = polygon[(k + 1) % n];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a).norm() / target_h - 1e-9)));
    for (int i = 0; i < pieces; ++i) {
      ring.push_back(a + (static_cast<double>(i) / pieces) * (b - a));
      tags.push_back(k);
    }
  }

  Cdt cdt(diam);
  cdt.set_boundary(ring, tags);

  // Interior points on a triangular lattice, kept away from the boundary.
  Vec2 lo = polygon[0];
  Vec2 hi = polygon[0];
  for (const auto& p : polygon) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double dy = target_h * std::sqrt(3.0) / 2.0;
  int row = 0;
  for (double y = lo.y() + 0.5 * dy; y < hi.y(); y += dy, ++row) {
    const double shift = (row % 2 == 0) ? 0.25 * target_h : 0.75 * target_h;
    for (double x = lo.x() + shift; x < hi.x(); x += target_h) {
      const Vec2 p(x, y);
      if (!point_in_polygon(p, polygon)) continue;
      double dist = std::numeric_limits<double>::max();
      for (int k = 0; k < n; ++k) dist = std::min(dist, point_segment_distance(p, polygon[k], polygon[(k + 1) % n]));
      if (dist < 0.5 * target_h) continue;
      cdt.insert(p);
    }
  }
  cdt.refine(1.5 * target_h);

  SubdomainMesh mesh;
  mesh.subdomain_id = subdomain_id;
  mesh.nodes = cdt.pts;
  mesh.triangles = cdt.tris;
  mesh.boundary_edges = cdt.boundary_edges();
  validate_mesh(mesh);
  return mesh;
}

SubdomainMesh structured_rectangle(const Vec2& lo, const Vec2& hi, int nx, int ny, int subdomain_id) {
  if (nx < 1 || ny < 1) throw InputError("structured_rectangle needs nx, ny >= 1");
  if (!(hi.x() > lo.x() && hi.y() > lo.y())) throw GeometryError("structured_rectangle: empty box");
  SubdomainMesh mesh;
  mesh.subdomain_id = subdomain_id;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      mesh.nodes.emplace_back(lo.x() + (hi.x() - lo.x()) * i / nx, lo.y() + (hi.y() - lo.y()) * j / ny);
    }
  }
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int lower = static_cast<int>(mesh.triangles.size());
      mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      if (j == 0) mesh.boundary_edges.push_back({lower, 0, 0});
      if (i == nx - 1) mesh.boundary_edges.push_back({lower, 1, 1});
      if (j == ny - 1) mesh.boundary_edges.push_back({lower + 1, 1, 2});
      if (i == 0) mesh.boundary_edges.push_back({lower + 1, 2, 3});
    }
  }
  return mesh;
}

void retag_boundary(SubdomainMesh& mesh, std::span<const Vec2> polygon) {
  std::unordered_map<std::uint64_t, std::pair<int, int>> count;  // key -> (uses, last (t, k))
  std::map<std::uint64_t, std::pair<int, int>> owner;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    for (int k = 0; k < 3; ++k) {
      const auto key = edge_key(mesh.triangles[t][k], mesh.triangles[t][(k + 1) % 3]);
      ++count[key].first;
      owner[key] = {t, k};
    }
  }
  const double tol = 1e-9 * mesh.bounding_diameter();
  mesh.boundary_edges.clear();
  for (const auto& [key, tk] : owner) {
    if (count[key].first != 1) continue;
    BoundaryEdge e{tk.first, tk.second, -1};
    const auto [a, b] = mesh.edge_nodes(e);
    for (std::size_t k = 0; k < polygon.size(); ++k) {
      const Vec2& p = polygon[k];
      const Vec2& q = polygon[(k + 1) % polygon.size()];
      if (point_segment_distance(mesh.nodes[a], p, q) <= tol && point_segment_distance(mesh.nodes[b], p, q) <= tol) {
        e.tag = static_cast<int>(k);
        break;
      }
    }
    mesh.boundary_edges.push_back(e);
  }
  std::sort(mesh.boundary_edges.begin(), mesh.boundary_edges.end(), [](const BoundaryEdge& x, const BoundaryEdge& y) {
    return std::tie(x.tag, x.triangle, x.local_edge) < std::tie(y.tag, y.triangle, y.local_edge);
  });
}

void validate_mesh(const SubdomainMesh& mesh) {
  const double diam = mesh.bounding_diameter();
  const int nn = static_cast<int>(mesh.nodes.size());
  std::unordered_map<std::uint64_t, int> uses;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    for (int v : mesh.triangles[t]) {
      if (v < 0 || v >= nn) throw GeometryError("triangle references a missing node");
    }
    if (!(mesh.area(t) > kRelTol * diam * diam)) {
      std::ostringstream os;
      os << "triangle " << t << " of subdomain " << mesh.subdomain_id << " has non-positive area";
      throw GeometryError(os.str());
    }
    for (int k = 0; k < 3; ++k) ++uses[edge_key(mesh.triangles[t][k], mesh.triangles[t][(k + 1) % 3])];
  }
  std::unordered_map<std::uint64_t, int> seen;
  for (const auto& e : mesh.boundary_edges) {
    if (e.triangle < 0 || e.triangle >= static_cast<int>(mesh.triangles.size()) || e.local_edge < 0 ||
        e.local_edge > 2) {
      throw GeometryError("boundary edge references a missing triangle");
    }
    const auto [a, b] = mesh.edge_nodes(e);
    const auto key = edge_key(a, b);
    if (uses[key] != 1) throw GeometryError("boundary edge is shared by more than one triangle");
    if (++seen[key] > 1) throw GeometryError("duplicate boundary edge");
  }
}

}  // namespace nitsche
