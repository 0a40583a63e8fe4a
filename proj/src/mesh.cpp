#include "dgschwarz/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>

namespace dgschwarz {

// ---------------------------------------------------------------- Domain

double Domain::area() const {
  double a = 0.0;
  for (const auto& piece : pieces) a += signed_area(piece);
  return a;
}

BoundingBox Domain::bbox() const {
  std::vector<Vec2> all;
  for (const auto& piece : pieces) all.insert(all.end(), piece.begin(), piece.end());
  return bounding_box(all);
}

bool Domain::contains(const Vec2& x, double slack) const {
  return std::any_of(pieces.begin(), pieces.end(),
                     [&](const Polygon& piece) { return dgschwarz::contains(piece, x, slack); });
}

Domain Domain::unit_square() {
  return Domain{{Polygon{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}}};
}

Domain Domain::unit_lshape() {
  // The corner (1/2,1/2) is kept as an explicit vertex of the lower piece so
  // that clipped pieces on either side of the interface share vertices.
  return Domain{{
      Polygon{{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.5}, {0.5, 0.5}, {0.0, 0.5}},
      Polygon{{0.0, 0.5}, {0.5, 0.5}, {0.5, 1.0}, {0.0, 1.0}},
  }};
}

Domain Domain::from_polygon(const Polygon& boundary) {
  if (is_convex(boundary)) return Domain{{boundary}};
  Domain d;
  for (const auto& t : triangulate_polygon(boundary)) d.pieces.push_back({t.a, t.b, t.c});
  return d;
}

// ---------------------------------------------------------- PolytopicMesh

PolytopicMesh::PolytopicMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = n_vertices();
  const std::size_t nc = cells_.size();
  area_.resize(nc);
  diameter_.resize(nc);
  bbox_.resize(nc);
  centroid_.resize(nc);
  for (std::size_t k = 0; k < nc; ++k) {
    auto& loop = cells_[k];
    if (loop.size() < 3) {
      throw MeshError("cell " + std::to_string(k) + " has fewer than 3 vertices");
    }
    for (std::size_t i = 0; i < loop.size(); ++i) {
      if (loop[i] < 0 || loop[i] >= nv) {
        throw MeshError("cell " + std::to_string(k) + " references a missing vertex");
      }
      if (loop[i] == loop[(i + 1) % loop.size()]) {
        throw MeshError("cell " + std::to_string(k) + " repeats a vertex");
      }
    }
    Polygon poly = cell_polygon(static_cast<int>(k));
    double a = signed_area(poly);
    if (a < 0.0) {
      std::reverse(loop.begin(), loop.end());
      std::reverse(poly.begin(), poly.end());
      a = -a;
    }
    if (!(a > 0.0)) throw MeshError("cell " + std::to_string(k) + " has zero area");
    area_[k] = a;
    diameter_[k] = diameter(poly);
    bbox_[k] = bounding_box(poly);
    centroid_[k] = centroid(poly);
    mesh_size_ = std::max(mesh_size_, diameter_[k]);
  }
}

Polygon PolytopicMesh::cell_polygon(int cell) const {
  Polygon poly;
  poly.reserve(cells_[cell].size());
  for (int v : cells_[cell]) poly.push_back(vertices_[v]);
  return poly;
}

double PolytopicMesh::total_area() const {
  return std::accumulate(area_.begin(), area_.end(), 0.0);
}

BoundingBox PolytopicMesh::bbox() const { return bounding_box(vertices_); }

// --------------------------------------------------------------- topology

FaceSet extract_topology(const PolytopicMesh& mesh) {
  FaceSet fs;
  fs.cell_faces.resize(mesh.n_cells());
  std::unordered_map<std::uint64_t, int> by_key;
  by_key.reserve(4 * static_cast<std::size_t>(mesh.n_cells()));
  const auto& verts = mesh.vertices();

  for (int k = 0; k < mesh.n_cells(); ++k) {
    const auto& loop = mesh.cells()[k];
    const int m = static_cast<int>(loop.size());
    fs.cell_faces[k].resize(m);
    for (int e = 0; e < m; ++e) {
      const int u = loop[e];
      const int v = loop[(e + 1) % m];
      const auto lo = static_cast<std::uint64_t>(std::min(u, v));
      const auto hi = static_cast<std::uint64_t>(std::max(u, v));
      const std::uint64_t key = (lo << 32) | hi;
      auto it = by_key.find(key);
      if (it == by_key.end()) {
        Face f;
        f.v0 = u;
        f.v1 = v;
        f.a = verts[u];
        f.b = verts[v];
        const Vec2 d = f.b - f.a;
        f.measure = d.norm();
        f.normal = Vec2(d.y(), -d.x()) / f.measure;
        f.plus = {k, e};
        const int id = static_cast<int>(fs.faces.size());
        fs.faces.push_back(f);
        by_key.emplace(key, id);
        fs.cell_faces[k][e] = id;
      } else {
        Face& f = fs.faces[it->second];
        if (f.minus || f.plus.cell == k) {
          throw MeshError("non-manifold edge (" + std::to_string(u) + ", " + std::to_string(v) +
                          ") shared by more than two cells");
        }
        if (f.v0 == u) {
          throw MeshError("cells " + std::to_string(f.plus.cell) + " and " + std::to_string(k) +
                          " overlap along an edge");
        }
        f.minus = FaceSide{k, e};
        fs.cell_faces[k][e] = it->second;
      }
    }
  }
  for (const auto& f : fs.faces) {
    if (f.is_boundary()) {
      ++fs.n_boundary;
    } else {
      ++fs.n_interior;
    }
  }
  return fs;
}

// -------------------------------------------------------- sub-tessellation

namespace {

std::vector<Triangle> ear_clip(const Polygon& input) {
  const double scale = diameter(input);
  const double tol = 1e-12 * scale * scale;
  // Collinear vertices produce zero-area ears; drop them first.
  Polygon poly;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const Vec2& prev = input[(i + input.size() - 1) % input.size()];
    const Vec2& next = input[(i + 1) % input.size()];
    if (std::abs(cross(input[i] - prev, next - input[i])) > tol) poly.push_back(input[i]);
  }
  std::vector<int> idx(poly.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Triangle> tris;

  auto strictly_inside = [&](const Vec2& x, const Vec2& a, const Vec2& b, const Vec2& c) {
    return cross(b - a, x - a) > tol && cross(c - b, x - b) > tol && cross(a - c, x - c) > tol;
  };

  while (idx.size() > 3) {
    const std::size_t n = idx.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = poly[idx[(i + n - 1) % n]];
      const Vec2& b = poly[idx[i]];
      const Vec2& c = poly[idx[(i + 1) % n]];
      if (cross(b - a, c - b) <= tol) continue;
      bool blocked = false;
      for (std::size_t j = 0; j < n && !blocked; ++j) {
        if (j == i || j == (i + 1) % n || j == (i + n - 1) % n) continue;
        const Vec2& x = poly[idx[j]];
        if ((x - a).norm() <= 1e-14 * scale || (x - c).norm() <= 1e-14 * scale) continue;
        blocked = strictly_inside(x, a, b, c);
      }
      if (blocked) continue;
      tris.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw MeshError("ear clipping failed: polygon is not simple");
  }
  if (idx.size() == 3) {
    Triangle t{poly[idx[0]], poly[idx[1]], poly[idx[2]]};
    if (t.area() <= 0.0) throw MeshError("ear clipping produced a degenerate triangle");
    tris.push_back(t);
  }
  return tris;
}

}  // namespace

std::vector<Triangle> triangulate_polygon(const Polygon& poly) {
  const double area = signed_area(poly);
  if (!(area > 0.0)) throw MeshError("cannot triangulate a polygon with non-positive area");
  const Vec2 c = centroid(poly);
  std::vector<Triangle> fan;
  fan.reserve(poly.size());
  bool star = true;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Triangle t{c, poly[i], poly[(i + 1) % poly.size()]};
    if (!(t.area() > 1e-12 * area)) {
      star = false;
      break;
    }
    fan.push_back(t);
  }
  if (star) return fan;
  return ear_clip(poly);
}

SubTessellation subtessellate(const PolytopicMesh& mesh) {
  SubTessellation st;
  st.cells.reserve(mesh.n_cells());
  for (int k = 0; k < mesh.n_cells(); ++k) {
    st.cells.push_back(triangulate_polygon(mesh.cell_polygon(k)));
  }
  return st;
}

}  // namespace dgschwarz
