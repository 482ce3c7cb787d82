#pragma once

#include <vector>

#include "nitsche/interface.hpp"
#include "nitsche/mesh.hpp"

namespace nitsche {

/// A piece of an interface segment on which both bulk traces and the beam
/// element are single polynomials.
struct SubSegment {
  double s_begin = 0.0;
  double s_end = 0.0;
  int element = -1;         ///< beam element index within the segment
  int plus_triangle = -1;   ///< adjacent triangle in the plus-side mesh
  int minus_triangle = -1;  ///< adjacent triangle in the minus-side mesh

  [[nodiscard]] double length() const { return s_end - s_begin; }
};

struct SegmentCut {
  std::vector<SubSegment> pieces;

  [[nodiscard]] std::vector<double> breakpoints() const;
};

/// One entry per interface segment.
using CutPartition = std::vector<SegmentCut>;

/// Sorted union of breakpoint lists on [0, length]; points closer than
/// tol are merged.
std::vector<double> merge_breakpoints(const std::vector<std::vector<double>>& lists, double tol);

/// Union refinement of the beam partition and the two bulk trace partitions
/// along `segment`. Throws GeometryError naming the segment and s-interval when
/// either mesh fails to cover the segment with boundary edges.
SegmentCut build_cut_partition(const InterfaceSegment& segment, const SubdomainMesh& plus_mesh,
                               const SubdomainMesh& minus_mesh, int segment_index = 0);

}  // namespace nitsche
