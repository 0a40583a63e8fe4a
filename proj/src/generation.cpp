#include "dgschwarz/generation.hpp"

#include "polygon_soup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>

namespace dgschwarz {

namespace {

/// Uniform bucket grid over seed positions for nearest-first neighbour scans.
class SeedGrid {
 public:
  SeedGrid(const std::vector<Vec2>& seeds, const BoundingBox& box) : seeds_(seeds), box_(box) {
    const Vec2 ext = (box.hi - box.lo).cwiseMax(1e-300);
    const double n = std::max<double>(1.0, static_cast<double>(seeds.size()));
    bucket_ = std::sqrt(ext.x() * ext.y() / n);
    nx_ = std::max(1, static_cast<int>(std::ceil(ext.x() / bucket_)));
    ny_ = std::max(1, static_cast<int>(std::ceil(ext.y() / bucket_)));
    buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
      const auto [bx, by] = locate(seeds[i]);
      buckets_[static_cast<std::size_t>(by) * nx_ + bx].push_back(i);
    }
  }

  std::pair<int, int> locate(const Vec2& x) const {
    const int bx = std::clamp(static_cast<int>((x.x() - box_.lo.x()) / bucket_), 0, nx_ - 1);
    const int by = std::clamp(static_cast<int>((x.y() - box_.lo.y()) / bucket_), 0, ny_ - 1);
    return {bx, by};
  }

  /// Calls visit(j) for seeds in Chebyshev ring `r` around bucket (bx, by).
  template <class F>
  void ring(int bx, int by, int r, F&& visit) const {
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
        const int x = bx + dx;
        const int y = by + dy;
        if (x < 0 || y < 0 || x >= nx_ || y >= ny_) continue;
        for (int j : buckets_[static_cast<std::size_t>(y) * nx_ + x]) visit(j);
      }
    }
  }

  double bucket_size() const { return bucket_; }
  int max_ring() const { return std::max(nx_, ny_); }

 private:
  const std::vector<Vec2>& seeds_;
  BoundingBox box_;
  double bucket_ = 1.0;
  int nx_ = 1;
  int ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

double max_radius(const std::vector<Polygon>& pieces, const Vec2& center) {
  double r = 0.0;
  for (const auto& piece : pieces) {
    for (const auto& p : piece) r = std::max(r, (p - center).norm());
  }
  return r;
}

void check_seeds(const std::vector<Vec2>& seeds, const Domain& domain) {
  if (seeds.empty()) throw MeshError("voronoi: no seeds given");
  const BoundingBox box = domain.bbox();
  const double scale = (box.hi - box.lo).norm();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!domain.contains(seeds[i], 1e-12 * scale)) {
      throw MeshError("voronoi: seed " + std::to_string(i) + " lies outside the domain");
    }
  }
  SeedGrid grid(seeds, box);
  const double tol = 1e-12 * scale;
  for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
    const auto [bx, by] = grid.locate(seeds[i]);
    for (int r = 0; r <= 1; ++r) {
      grid.ring(bx, by, r, [&](int j) {
        if (j != i && (seeds[j] - seeds[i]).norm() <= tol) {
          throw MeshError("voronoi: duplicate seeds " + std::to_string(std::min(i, j)) + " and " +
                          std::to_string(std::max(i, j)));
        }
      });
    }
  }
}

/// Clipped Voronoi region of every seed, one polygon per convex domain piece.
std::vector<std::vector<Polygon>> voronoi_pieces(const std::vector<Vec2>& seeds, const Domain& domain) {
  const BoundingBox box = domain.bbox();
  SeedGrid grid(seeds, box);
  const double min_area = 1e-15 * domain.area();
  std::vector<std::vector<Polygon>> result(seeds.size());

  for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
    const Vec2 si = seeds[i];
    std::vector<Polygon> pieces = domain.pieces;
    double radius = max_radius(pieces, si);
    const auto [bx, by] = grid.locate(si);
    for (int r = 0; r <= grid.max_ring(); ++r) {
      if (r >= 1 && (r - 1) * grid.bucket_size() > 2.0 * radius) break;
      grid.ring(bx, by, r, [&](int j) {
        if (j == i) return;
        const Vec2 d = seeds[j] - si;
        if (d.norm() >= 2.0 * radius) return;
        const double offset = d.dot(0.5 * (si + seeds[j]));
        std::vector<Polygon> kept;
        for (const auto& piece : pieces) {
          Polygon clipped = clip_halfplane(piece, d, offset);
          if (clipped.size() >= 3 && signed_area(clipped) > min_area) kept.push_back(std::move(clipped));
        }
        pieces = std::move(kept);
      });
      radius = max_radius(pieces, si);
    }
    result[i] = std::move(pieces);
  }
  return result;
}

Vec2 pieces_centroid(const std::vector<Polygon>& pieces) {
  double area = 0.0;
  Vec2 acc = Vec2::Zero();
  for (const auto& piece : pieces) {
    const double a = signed_area(piece);
    area += a;
    acc += a * centroid(piece);
  }
  return acc / area;
}

void lloyd_relax(std::vector<Vec2>& seeds, const Domain& domain, int iters) {
  for (int it = 0; it < iters; ++it) {
    const auto pieces = voronoi_pieces(seeds, domain);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (pieces[i].empty()) continue;
      const Vec2 c = pieces_centroid(pieces[i]);
      if (domain.contains(c)) seeds[i] = c;
    }
  }
}

/// Welds the clipped pieces of all owners and merges each owner's pieces into
/// one cell per connected component.
PolytopicMesh assemble_cells(const std::vector<std::vector<Polygon>>& pieces_per_owner, double scale) {
  std::vector<Polygon> flat;
  std::vector<int> owner;
  for (int o = 0; o < static_cast<int>(pieces_per_owner.size()); ++o) {
    for (const auto& p : pieces_per_owner[o]) {
      flat.push_back(p);
      owner.push_back(o);
    }
  }
  const double tol = 1e-10 * scale;
  detail::IndexedPolygons soup = detail::weld(flat, tol);
  detail::insert_hanging_vertices(soup, tol);

  std::vector<std::vector<std::vector<int>>> grouped(pieces_per_owner.size());
  for (std::size_t k = 0; k < soup.loops.size(); ++k) {
    if (!soup.loops[k].empty()) grouped[owner[k]].push_back(soup.loops[k]);
  }
  std::vector<std::vector<int>> cells;
  for (const auto& group : grouped) {
    if (group.empty()) continue;
    if (group.size() == 1) {
      cells.push_back(group.front());
      continue;
    }
    for (auto& loop : detail::boundary_loops(group, soup.vertices)) {
      Polygon poly;
      for (int v : loop) poly.push_back(soup.vertices[v]);
      const double a = signed_area(poly);
      if (a < 0.0) throw MeshError("voronoi: merged cell encloses a hole");
      if (a > 0.0) cells.push_back(std::move(loop));
    }
  }
  return detail::compact_mesh(soup.vertices, std::move(cells));
}

}  // namespace

std::vector<Vec2> random_seeds(const Domain& domain, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const BoundingBox box = domain.bbox();
  std::uniform_real_distribution<double> ux(box.lo.x(), box.hi.x());
  std::uniform_real_distribution<double> uy(box.lo.y(), box.hi.y());
  std::vector<Vec2> seeds;
  seeds.reserve(count);
  while (seeds.size() < count) {
    const Vec2 x(ux(rng), uy(rng));
    if (!domain.contains(x)) continue;
    if (std::any_of(seeds.begin(), seeds.end(), [&](const Vec2& s) { return s == x; })) continue;
    seeds.push_back(x);
  }
  return seeds;
}

PolytopicMesh generate_voronoi(std::vector<Vec2> seeds, const Domain& domain, int lloyd_iters) {
  check_seeds(seeds, domain);
  lloyd_relax(seeds, domain, lloyd_iters);
  const BoundingBox box = domain.bbox();
  return assemble_cells(voronoi_pieces(seeds, domain), (box.hi - box.lo).norm());
}

PolytopicMesh quad_grid(int n) {
  if (n < 1) throw MeshError("quad_grid: n must be >= 1");
  std::vector<Vec2> verts;
  verts.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      verts.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v = j * (n + 1) + i;
      cells.push_back({v, v + 1, v + n + 2, v + n + 1});
    }
  }
  return PolytopicMesh(std::move(verts), std::move(cells));
}

PolytopicMesh lshape_voronoi16(std::uint64_t seed) {
  const Domain domain = Domain::unit_lshape();
  return generate_voronoi(random_seeds(domain, 16, seed), domain, 60);
}

PolytopicMesh generate_structured(StructuredKind kind, std::uint64_t n_or_seed) {
  switch (kind) {
    case StructuredKind::quad:
      return quad_grid(static_cast<int>(n_or_seed));
    case StructuredKind::lshape_voronoi16:
      return lshape_voronoi16(n_or_seed);
  }
  throw MeshError("generate_structured: unknown kind");
}

PolytopicMesh refine_cells(const PolytopicMesh& coarse, int cells_per_coarse, std::uint64_t seed,
                           int lloyd_iters) {
  if (cells_per_coarse < 1) throw MeshError("refine_cells: cells_per_coarse must be >= 1");
  std::vector<std::vector<Polygon>> all;
  for (int c = 0; c < coarse.n_cells(); ++c) {
    const Domain piece = Domain::from_polygon(coarse.cell_polygon(c));
    std::vector<Vec2> seeds =
        random_seeds(piece, static_cast<std::size_t>(cells_per_coarse), seed * 1000003ULL + static_cast<std::uint64_t>(c));
    lloyd_relax(seeds, piece, lloyd_iters);
    auto pieces = voronoi_pieces(seeds, piece);
    for (auto& p : pieces) all.push_back(std::move(p));
  }
  const BoundingBox box = coarse.bbox();
  return assemble_cells(all, (box.hi - box.lo).norm());
}

}  // namespace dgschwarz
