#pragma once

#include "dgschwarz/mesh.hpp"

#include <filesystem>
#include <variant>
#include <vector>

namespace dgschwarz {

/// Assignment of mesh cells to subdomains. Every part is nonempty and
/// edge-connected; `part_adjacency` lists parts sharing at least one face.
struct Partition {
  std::vector<int> part_of;
  int n_parts = 0;
  std::vector<std::vector<int>> part_adjacency;

  std::vector<std::vector<int>> cells_of_part() const;
};

/// Validates an explicit assignment (range, nonempty, connected) and builds
/// the adjacency lists.
Partition make_partition(const PolytopicMesh& mesh, std::vector<int> part_of);
Partition identity_partition(const PolytopicMesh& mesh);

enum class AgglomerationMethod { coordinate_bisection, from_file };

/// Splits the mesh into `n_parts` connected subdomains. Coordinate bisection
/// recursively halves cell centroids along the longer axis; fragments that
/// end up disconnected are merged into the neighbouring part with which they
/// share the longest boundary. `from_file` reads one part index per line.
Partition agglomerate(const PolytopicMesh& mesh, int n_parts, AgglomerationMethod method,
                      const std::filesystem::path& partition_file = {});

/// Fine-to-coarse relation. Nested meshes store the parent coarse cell of
/// every fine cell; non-nested ones store all overlap polygons.
struct NestedMap {
  std::vector<int> parent;
};

struct Overlap {
  int fine = -1;
  int coarse = -1;
  Polygon region;
  double area = 0.0;
};

struct NonNestedMap {
  std::vector<Overlap> overlaps;
};

using NestingMap = std::variant<NestedMap, NonNestedMap>;

inline bool is_nested(const NestingMap& map) { return std::holds_alternative<NestedMap>(map); }

struct CoarseMesh {
  PolytopicMesh mesh;
  NestedMap nesting;
};

/// Agglomerates each part into one polygonal cell (the part's outer boundary).
/// Throws MeshError if a part is not simply connected.
CoarseMesh coarsen(const PolytopicMesh& mesh, const Partition& partition);

/// Classifies a fine/coarse pair geometrically. With `force_intersection`
/// the overlap polygons are computed even for nested pairs. The
/// intersection path requires convex coarse cells.
NestingMap nesting_map(const PolytopicMesh& fine, const PolytopicMesh& coarse,
                       bool force_intersection = false);

/// Maximum number of other parts whose closure touches a given part
/// (sharing a face or only a vertex).
int coloring_bound(const PolytopicMesh& mesh, const Partition& partition);

}  // namespace dgschwarz
