#pragma once

#include "dgschwarz/geometry.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace dgschwarz {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A region of the plane described as a union of convex pieces with
/// disjoint interiors. Voronoi cells are clipped piece by piece.
struct Domain {
  std::vector<Polygon> pieces;

  double area() const;
  BoundingBox bbox() const;
  bool contains(const Vec2& x, double slack = 0.0) const;

  static Domain unit_square();
  /// (0,1)^2 with the quadrant [1/2,1]^2 removed; area 3/4.
  static Domain unit_lshape();
  /// A simple polygon; convex input stays a single piece, otherwise it is
  /// split into triangles.
  static Domain from_polygon(const Polygon& boundary);
};

/// 2D polygonal mesh. Immutable after construction; per-cell geometry
/// (area, diameter, bounding box, centroid) is computed up front.
class PolytopicMesh {
 public:
  PolytopicMesh() = default;
  /// Cells are vertex-index loops. Clockwise loops are reversed; degenerate
  /// cells (fewer than 3 vertices, non-positive area, bad indices) throw.
  PolytopicMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_vertices() const { return static_cast<int>(vertices_.size()); }

  Polygon cell_polygon(int cell) const;
  double cell_area(int cell) const { return area_[cell]; }
  double cell_diameter(int cell) const { return diameter_[cell]; }
  const BoundingBox& cell_bbox(int cell) const { return bbox_[cell]; }
  const Vec2& cell_centroid(int cell) const { return centroid_[cell]; }
  const std::vector<double>& cell_areas() const { return area_; }
  const std::vector<double>& cell_diameters() const { return diameter_; }

  /// Largest cell diameter (h for fine meshes, H for coarse ones).
  double mesh_size() const { return mesh_size_; }
  double total_area() const;
  BoundingBox bbox() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::vector<int>> cells_;
  std::vector<double> area_;
  std::vector<double> diameter_;
  std::vector<BoundingBox> bbox_;
  std::vector<Vec2> centroid_;
  double mesh_size_ = 0.0;
};

struct FaceSide {
  int cell = -1;
  int local_edge = -1;  // edge k joins local vertices k and k+1 of the cell loop
};

/// One mesh edge. The normal points from `plus` to `minus` (outward on the
/// boundary) and the endpoints follow the orientation of the plus cell.
struct Face {
  int v0 = -1;
  int v1 = -1;
  Vec2 a{0.0, 0.0};
  Vec2 b{0.0, 0.0};
  double measure = 0.0;
  Vec2 normal{0.0, 0.0};
  FaceSide plus;
  std::optional<FaceSide> minus;

  bool is_boundary() const { return !minus.has_value(); }
};

struct FaceSet {
  std::vector<Face> faces;
  std::vector<std::vector<int>> cell_faces;  // face ids per cell, in local edge order
  int n_interior = 0;
  int n_boundary = 0;
};

/// Classifies every cell edge. The lower cell index is the plus side.
/// Throws MeshError for edges shared by more than two cells.
FaceSet extract_topology(const PolytopicMesh& mesh);

struct Triangle {
  Vec2 a{0.0, 0.0};
  Vec2 b{0.0, 0.0};
  Vec2 c{0.0, 0.0};
  double area() const { return 0.5 * cross(b - a, c - a); }
};

struct SubTessellation {
  std::vector<std::vector<Triangle>> cells;
};

/// Centroid fan when the cell is star-shaped with respect to its centroid,
/// ear clipping otherwise. Throws MeshError if no valid triangulation exists.
std::vector<Triangle> triangulate_polygon(const Polygon& poly);
SubTessellation subtessellate(const PolytopicMesh& mesh);

}  // namespace dgschwarz
