#include "dgschwarz/partition.hpp"

#include "polygon_soup.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>

namespace dgschwarz {

namespace {

std::vector<std::vector<int>> cell_neighbours(const FaceSet& faces, int n_cells) {
  std::vector<std::vector<int>> nbr(n_cells);
  for (const auto& f : faces.faces) {
    if (f.is_boundary()) continue;
    nbr[f.plus.cell].push_back(f.minus->cell);
    nbr[f.minus->cell].push_back(f.plus.cell);
  }
  return nbr;
}

/// Connected components of each part, as lists of cells.
std::vector<std::vector<std::vector<int>>> part_components(const std::vector<int>& part_of, int n_parts,
                                                           const std::vector<std::vector<int>>& nbr) {
  std::vector<std::vector<std::vector<int>>> comps(n_parts);
  std::vector<char> seen(part_of.size(), 0);
  for (int k = 0; k < static_cast<int>(part_of.size()); ++k) {
    if (seen[k]) continue;
    std::vector<int> comp;
    std::queue<int> todo;
    todo.push(k);
    seen[k] = 1;
    while (!todo.empty()) {
      const int c = todo.front();
      todo.pop();
      comp.push_back(c);
      for (int n : nbr[c]) {
        if (!seen[n] && part_of[n] == part_of[k]) {
          seen[n] = 1;
          todo.push(n);
        }
      }
    }
    comps[part_of[k]].push_back(std::move(comp));
  }
  return comps;
}

void bisect(const PolytopicMesh& mesh, std::vector<int> cells, int n_parts, int first_part,
            std::vector<int>& part_of) {
  if (n_parts == 1) {
    for (int c : cells) part_of[c] = first_part;
    return;
  }
  std::vector<Vec2> pts;
  pts.reserve(cells.size());
  for (int c : cells) pts.push_back(mesh.cell_centroid(c));
  const BoundingBox box = bounding_box(pts);
  const int axis = (box.hi.y() - box.lo.y()) > (box.hi.x() - box.lo.x()) ? 1 : 0;
  std::sort(cells.begin(), cells.end(), [&](int a, int b) {
    const Vec2& pa = mesh.cell_centroid(a);
    const Vec2& pb = mesh.cell_centroid(b);
    if (pa[axis] != pb[axis]) return pa[axis] < pb[axis];
    if (pa[1 - axis] != pb[1 - axis]) return pa[1 - axis] < pb[1 - axis];
    return a < b;
  });
  const int left_parts = n_parts / 2;
  const auto left_cells = static_cast<std::size_t>(
      std::llround(static_cast<double>(cells.size()) * left_parts / static_cast<double>(n_parts)));
  std::vector<int> left(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(left_cells));
  std::vector<int> right(cells.begin() + static_cast<std::ptrdiff_t>(left_cells), cells.end());
  bisect(mesh, std::move(left), left_parts, first_part, part_of);
  bisect(mesh, std::move(right), n_parts - left_parts, first_part + left_parts, part_of);
}

/// Renumbers parts in order of their lowest cell index.
void canonical_numbering(std::vector<int>& part_of) {
  std::map<int, int> relabel;
  for (int& p : part_of) {
    auto [it, inserted] = relabel.emplace(p, static_cast<int>(relabel.size()));
    p = it->second;
  }
}

void merge_fragments(const PolytopicMesh& mesh, const FaceSet& faces, std::vector<int>& part_of, int n_parts) {
  const auto nbr = cell_neighbours(faces, mesh.n_cells());
  for (int sweep = 0; sweep < 100; ++sweep) {
    const auto comps = part_components(part_of, n_parts, nbr);
    bool changed = false;
    for (int p = 0; p < n_parts; ++p) {
      if (comps[p].size() <= 1) continue;
      std::size_t largest = 0;
      for (std::size_t i = 1; i < comps[p].size(); ++i) {
        if (comps[p][i].size() > comps[p][largest].size()) largest = i;
      }
      for (std::size_t i = 0; i < comps[p].size(); ++i) {
        if (i == largest) continue;
        std::set<int> frag(comps[p][i].begin(), comps[p][i].end());
        std::map<int, double> shared;
        for (int c : frag) {
          for (int fid : faces.cell_faces[c]) {
            const Face& f = faces.faces[fid];
            if (f.is_boundary()) continue;
            const int other = f.plus.cell == c ? f.minus->cell : f.plus.cell;
            if (part_of[other] != p) shared[part_of[other]] += f.measure;
          }
        }
        if (shared.empty()) continue;
        const auto best = std::max_element(shared.begin(), shared.end(),
                                           [](const auto& a, const auto& b) { return a.second < b.second; });
        for (int c : frag) part_of[c] = best->first;
        changed = true;
      }
    }
    if (!changed) return;
  }
  throw MeshError("agglomerate: could not make all parts connected");
}

}  // namespace

std::vector<std::vector<int>> Partition::cells_of_part() const {
  std::vector<std::vector<int>> cells(n_parts);
  for (int k = 0; k < static_cast<int>(part_of.size()); ++k) cells[part_of[k]].push_back(k);
  return cells;
}

Partition make_partition(const PolytopicMesh& mesh, std::vector<int> part_of) {
  if (static_cast<int>(part_of.size()) != mesh.n_cells()) {
    throw MeshError("partition has " + std::to_string(part_of.size()) + " entries for " +
                    std::to_string(mesh.n_cells()) + " cells");
  }
  int n_parts = 0;
  for (int p : part_of) {
    if (p < 0) throw MeshError("partition contains a negative part index");
    n_parts = std::max(n_parts, p + 1);
  }
  std::vector<int> sizes(n_parts, 0);
  for (int p : part_of) ++sizes[p];
  for (int p = 0; p < n_parts; ++p) {
    if (sizes[p] == 0) throw MeshError("part " + std::to_string(p) + " is empty");
  }
  const FaceSet faces = extract_topology(mesh);
  const auto comps = part_components(part_of, n_parts, cell_neighbours(faces, mesh.n_cells()));
  for (int p = 0; p < n_parts; ++p) {
    if (comps[p].size() != 1) throw MeshError("part " + std::to_string(p) + " is not connected");
  }
  Partition part;
  part.part_of = std::move(part_of);
  part.n_parts = n_parts;
  std::vector<std::set<int>> adj(n_parts);
  for (const auto& f : faces.faces) {
    if (f.is_boundary()) continue;
    const int a = part.part_of[f.plus.cell];
    const int b = part.part_of[f.minus->cell];
    if (a != b) {
      adj[a].insert(b);
      adj[b].insert(a);
    }
  }
  part.part_adjacency.resize(n_parts);
  for (int p = 0; p < n_parts; ++p) part.part_adjacency[p].assign(adj[p].begin(), adj[p].end());
  return part;
}

Partition identity_partition(const PolytopicMesh& mesh) {
  std::vector<int> part_of(mesh.n_cells());
  std::iota(part_of.begin(), part_of.end(), 0);
  return make_partition(mesh, std::move(part_of));
}

Partition agglomerate(const PolytopicMesh& mesh, int n_parts, AgglomerationMethod method,
                      const std::filesystem::path& partition_file) {
  if (n_parts < 1 || n_parts > mesh.n_cells()) {
    throw MeshError("agglomerate: n_parts=" + std::to_string(n_parts) + " outside [1, " +
                    std::to_string(mesh.n_cells()) + "]");
  }
  if (method == AgglomerationMethod::from_file) {
    std::ifstream in(partition_file);
    if (!in) throw MeshError("agglomerate: cannot open partition file " + partition_file.string());
    std::vector<int> part_of;
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        part_of.push_back(std::stoi(line));
      } catch (const std::exception&) {
        throw MeshError("agglomerate: malformed partition line '" + line + "'");
      }
    }
    Partition p = make_partition(mesh, std::move(part_of));
    if (p.n_parts != n_parts) {
      throw MeshError("agglomerate: partition file has " + std::to_string(p.n_parts) + " parts, expected " +
                      std::to_string(n_parts));
    }
    return p;
  }

  std::vector<int> part_of(mesh.n_cells(), 0);
  std::vector<int> all(mesh.n_cells());
  std::iota(all.begin(), all.end(), 0);
  bisect(mesh, std::move(all), n_parts, 0, part_of);
  const FaceSet faces = extract_topology(mesh);
  merge_fragments(mesh, faces, part_of, n_parts);
  canonical_numbering(part_of);
  return make_partition(mesh, std::move(part_of));
}

CoarseMesh coarsen(const PolytopicMesh& mesh, const Partition& partition) {
  if (static_cast<int>(partition.part_of.size()) != mesh.n_cells()) {
    throw MeshError("coarsen: partition does not match the mesh");
  }
  const auto parts = partition.cells_of_part();
  std::vector<std::vector<int>> loops;
  loops.reserve(parts.size());
  for (int p = 0; p < partition.n_parts; ++p) {
    if (parts[p].size() == 1) {
      loops.push_back(mesh.cells()[parts[p].front()]);
      continue;
    }
    std::vector<std::vector<int>> member_loops;
    for (int c : parts[p]) member_loops.push_back(mesh.cells()[c]);
    auto boundary = detail::boundary_loops(member_loops, mesh.vertices());
    if (boundary.size() != 1) {
      throw MeshError("coarsen: part " + std::to_string(p) + " is not simply connected (" +
                      std::to_string(boundary.size()) + " boundary loops)");
    }
    loops.push_back(std::move(boundary.front()));
  }
  CoarseMesh out{detail::compact_mesh(mesh.vertices(), std::move(loops)), NestedMap{partition.part_of}};
  return out;
}

NestingMap nesting_map(const PolytopicMesh& fine, const PolytopicMesh& coarse, bool force_intersection) {
  const BoundingBox box = coarse.bbox();
  const double scale = (box.hi - box.lo).norm();
  const double slack = 1e-10 * scale;

  std::vector<Polygon> coarse_polys(coarse.n_cells());
  for (int c = 0; c < coarse.n_cells(); ++c) coarse_polys[c] = coarse.cell_polygon(c);

  auto candidates = [&](const BoundingBox& b) {
    std::vector<int> out;
    for (int c = 0; c < coarse.n_cells(); ++c) {
      if (coarse.cell_bbox(c).overlaps(b, slack)) out.push_back(c);
    }
    return out;
  };

  if (!force_intersection) {
    std::vector<int> parent(fine.n_cells(), -1);
    bool nested = true;
    for (int f = 0; f < fine.n_cells() && nested; ++f) {
      const Polygon poly = fine.cell_polygon(f);
      const Vec2& xc = fine.cell_centroid(f);
      for (int c : candidates(fine.cell_bbox(f))) {
        if (!contains(coarse_polys[c], xc, slack)) continue;
        const bool all_in = std::all_of(poly.begin(), poly.end(),
                                        [&](const Vec2& v) { return contains(coarse_polys[c], v, slack); });
        if (all_in) {
          parent[f] = c;
          break;
        }
      }
      nested = parent[f] >= 0;
    }
    if (nested) return NestedMap{std::move(parent)};
  }

  for (int c = 0; c < coarse.n_cells(); ++c) {
    if (!is_convex(coarse_polys[c], 1e-10)) {
      throw MeshError("nesting_map: non-nested transfer requires convex coarse cells (cell " + std::to_string(c) +
                      " is not convex)");
    }
  }
  NonNestedMap map;
  for (int f = 0; f < fine.n_cells(); ++f) {
    const Polygon poly = fine.cell_polygon(f);
    std::vector<Polygon> pieces;
    if (is_convex(poly, 1e-10)) {
      pieces.push_back(poly);
    } else {
      for (const auto& t : triangulate_polygon(poly)) pieces.push_back({t.a, t.b, t.c});
    }
    double covered = 0.0;
    for (int c : candidates(fine.cell_bbox(f))) {
      for (const auto& piece : pieces) {
        Polygon region = convex_intersection(piece, coarse_polys[c]);
        if (region.empty()) continue;
        const double a = signed_area(region);
        covered += a;
        map.overlaps.push_back(Overlap{f, c, std::move(region), a});
      }
    }
    if (std::abs(covered - fine.cell_area(f)) > 1e-8 * fine.cell_area(f)) {
      throw MeshError("nesting_map: coarse mesh covers only " + std::to_string(covered / fine.cell_area(f)) +
                      " of fine cell " + std::to_string(f));
    }
  }
  return map;
}

int coloring_bound(const PolytopicMesh& mesh, const Partition& partition) {
  std::vector<std::set<int>> parts_at_vertex(mesh.n_vertices());
  for (int k = 0; k < mesh.n_cells(); ++k) {
    for (int v : mesh.cells()[k]) parts_at_vertex[v].insert(partition.part_of[k]);
  }
  std::vector<std::set<int>> touching(partition.n_parts);
  for (const auto& parts : parts_at_vertex) {
    for (int a : parts) {
      for (int b : parts) {
        if (a != b) touching[a].insert(b);
      }
    }
  }
  std::size_t best = 0;
  for (const auto& t : touching) best = std::max(best, t.size());
  return static_cast<int>(best);
}

}  // namespace dgschwarz
