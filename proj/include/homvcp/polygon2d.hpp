#pragma once

// Boundary of P_X = conv V + C in the plane, C solid with extreme rays a, b
// (counterclockwise from a to b): a ray in direction b ending at the first
// chain vertex, the convex chain, and a ray in direction a leaving the last
// vertex.

#include <vector>

#include "homvcp/geometry.hpp"

namespace homvcp {

struct Polygon2d {
  std::vector<Vec> chain;
  /// Unit extreme rays of C.
  Vec ray_a;
  Vec ray_b;
  /// Indices into the input points, aligned with chain.
  std::vector<std::size_t> chain_index;
};

/// Throws UnsupportedDimension unless m = 2 and DomainError for a
/// non-solid cone or no points.
Polygon2d boundary_polygon(const std::vector<Vec>& points, const std::vector<Vec>& cone_generators);

double distance_to_polygon_boundary(const Polygon2d& poly, const Vec& y);
bool polygon_contains(const Polygon2d& poly, const Vec& y, double tol = 1e-9);

/// Boundary points at spacing `step`, rays cut at `ray_length`.
std::vector<Vec> sample_polygon_boundary(const Polygon2d& poly, double step, double ray_length);

/// Closed chain for export: far point on the b-ray, chain vertices, far
/// point on the a-ray, then the first row again.
std::vector<Vec> closed_export_chain(const Polygon2d& poly, double far);

}  // namespace homvcp
