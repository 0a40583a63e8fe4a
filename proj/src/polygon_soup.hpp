#pragma once

// Internal helpers for turning independently clipped polygons into a
// conforming indexed mesh. Not part of the public API.

#include "dgschwarz/geometry.hpp"
#include "dgschwarz/mesh.hpp"

#include <vector>

namespace dgschwarz::detail {

struct IndexedPolygons {
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> loops;
};

/// Merges points closer than `tol` and drops loops that collapse to fewer
/// than three distinct vertices.
IndexedPolygons weld(const std::vector<Polygon>& polys, double tol);

/// Splits every edge at vertices that lie on it (T-junctions), so that
/// neighbouring loops traverse identical vertex sequences.
void insert_hanging_vertices(IndexedPolygons& soup, double tol);

/// Cancels directed edges that appear in both orientations and walks what is
/// left into closed loops. At vertices with several outgoing edges the walk
/// takes the leftmost turn, which keeps lobes touching at a point apart.
std::vector<std::vector<int>> boundary_loops(const std::vector<std::vector<int>>& loops,
                                             const std::vector<Vec2>& vertices);

/// Builds a mesh keeping only referenced vertices.
PolytopicMesh compact_mesh(const std::vector<Vec2>& vertices, std::vector<std::vector<int>> cells);

}  // namespace dgschwarz::detail
