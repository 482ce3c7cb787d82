#include "nitsche/cut_partition.hpp"

#include <algorithm>
#include <sstream>

#include "nitsche/errors.hpp"

namespace nitsche {

namespace {

struct TraceInterval {
  double s_begin;
  double s_end;
  int triangle;
};

/// Boundary edges of `mesh` lying on the segment, as sorted s-intervals.
std::vector<TraceInterval> trace_intervals(const InterfaceSegment& seg, const SubdomainMesh& mesh,
                                           int segment_index) {
  const double line_tol = 1e-9 * seg.length;
  std::vector<TraceInterval> out;
  for (const auto& e : mesh.boundary_edges) {
    const auto [a, b] = mesh.edge_nodes(e);
    const Vec2& pa = mesh.nodes[a];
    const Vec2& pb = mesh.nodes[b];
    if (seg.distance_to_line(pa) > line_tol || seg.distance_to_line(pb) > line_tol) continue;
    double s0 = seg.arclength_of(pa);
    double s1 = seg.arclength_of(pb);
    if (s0 > s1) std::swap(s0, s1);
    s0 = std::max(s0, 0.0);
    s1 = std::min(s1, seg.length);
    if (s1 - s0 <= line_tol) continue;
    out.push_back({s0, s1, e.triangle});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.s_begin < y.s_begin; });

  const double tol = 1e-9 * seg.length;
  double reached = 0.0;
  for (const auto& iv : out) {
    if (iv.s_begin > reached + tol) break;
    reached = std::max(reached, iv.s_end);
  }
  if (reached < seg.length - tol) {
    double gap_end = seg.length;
    for (const auto& iv : out) {
      if (iv.s_begin > reached + tol) {
        gap_end = iv.s_begin;
        break;
      }
    }
    std::ostringstream os;
    os << "mesh of subdomain " << mesh.subdomain_id << " does not cover interface segment " << segment_index
       << " on s in [" << reached << ", " << gap_end << "]";
    throw GeometryError(os.str());
  }
  return out;
}

int triangle_at(const std::vector<TraceInterval>& intervals, double s) {
  for (const auto& iv : intervals) {
    if (s >= iv.s_begin && s <= iv.s_end) return iv.triangle;
  }
  return -1;
}

}  // namespace

std::vector<double> SegmentCut::breakpoints() const {
  std::vector<double> out;
  if (pieces.empty()) return out;
  out.push_back(pieces.front().s_begin);
  for (const auto& p : pieces) out.push_back(p.s_end);
  return out;
}

std::vector<double> merge_breakpoints(const std::vector<std::vector<double>>& lists, double tol) {
  std::vector<double> all;
  for (const auto& l : lists) all.insert(all.end(), l.begin(), l.end());
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double s : all) {
    if (out.empty() || s - out.back() > tol) out.push_back(s);
  }
  return out;
}

SegmentCut build_cut_partition(const InterfaceSegment& segment, const SubdomainMesh& plus_mesh,
                               const SubdomainMesh& minus_mesh, int segment_index) {
  const auto plus = trace_intervals(segment, plus_mesh, segment_index);
  const auto minus = trace_intervals(segment, minus_mesh, segment_index);

  std::vector<double> beam{0.0};
  for (const auto& e : segment.elements) beam.push_back(e.s_end);
  std::vector<double> plus_pts{0.0, segment.length};
  for (const auto& iv : plus) {
    plus_pts.push_back(iv.s_begin);
    plus_pts.push_back(iv.s_end);
  }
  std::vector<double> minus_pts{0.0, segment.length};
  for (const auto& iv : minus) {
    minus_pts.push_back(iv.s_begin);
    minus_pts.push_back(iv.s_end);
  }
  auto bp = merge_breakpoints({beam, plus_pts, minus_pts}, 1e-10 * segment.length);
  // Snap the ends so the pieces tile [0, length] exactly.
  bp.front() = 0.0;
  bp.back() = segment.length;

  SegmentCut cut;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    SubSegment piece;
    piece.s_begin = bp[k];
    piece.s_end = bp[k + 1];
    const double mid = 0.5 * (piece.s_begin + piece.s_end);
    piece.element = segment.element_at(mid);
    piece.plus_triangle = triangle_at(plus, mid);
    piece.minus_triangle = triangle_at(minus, mid);
    if (piece.plus_triangle < 0 || piece.minus_triangle < 0) {
      std::ostringstream os;
      os << "interface segment " << segment_index << ": no adjacent triangle at s = " << mid;
      throw GeometryError(os.str());
    }
    cut.pieces.push_back(piece);
  }
  return cut;
}

}  // namespace nitsche
