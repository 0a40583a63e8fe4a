#include "polygon_soup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <unordered_map>

namespace dgschwarz::detail {

namespace {

std::uint64_t bucket_key(std::int64_t ix, std::int64_t iy) {
  return (static_cast<std::uint64_t>(ix) << 32) ^ static_cast<std::uint64_t>(iy & 0xffffffff);
}

}  // namespace

IndexedPolygons weld(const std::vector<Polygon>& polys, double tol) {
  IndexedPolygons out;
  std::unordered_map<std::uint64_t, std::vector<int>> grid;
  const double h = 4.0 * tol;

  auto find_or_add = [&](const Vec2& p) {
    const auto ix = static_cast<std::int64_t>(std::floor(p.x() / h));
    const auto iy = static_cast<std::int64_t>(std::floor(p.y() / h));
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(bucket_key(ix + dx, iy + dy));
        if (it == grid.end()) continue;
        for (int v : it->second) {
          if ((out.vertices[v] - p).norm() <= tol) return v;
        }
      }
    }
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(p);
    grid[bucket_key(ix, iy)].push_back(id);
    return id;
  };

  for (const auto& poly : polys) {
    std::vector<int> loop;
    for (const auto& p : poly) {
      const int v = find_or_add(p);
      if (loop.empty() || loop.back() != v) loop.push_back(v);
    }
    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    if (loop.size() >= 3) {
      out.loops.push_back(std::move(loop));
    } else {
      out.loops.emplace_back();
    }
  }
  return out;
}

void insert_hanging_vertices(IndexedPolygons& soup, double tol) {
  const auto& verts = soup.vertices;
  if (verts.empty()) return;
  const BoundingBox box = bounding_box(verts);
  const double extent = std::max((box.hi - box.lo).maxCoeff(), tol);
  const double h = std::max(extent / std::max(1.0, std::sqrt(static_cast<double>(verts.size()))), 10 * tol);

  std::unordered_map<std::uint64_t, std::vector<int>> grid;
  for (int v = 0; v < static_cast<int>(verts.size()); ++v) {
    const auto ix = static_cast<std::int64_t>(std::floor((verts[v].x() - box.lo.x()) / h));
    const auto iy = static_cast<std::int64_t>(std::floor((verts[v].y() - box.lo.y()) / h));
    grid[bucket_key(ix, iy)].push_back(v);
  }

  for (auto& loop : soup.loops) {
    if (loop.empty()) continue;
    std::vector<int> refined;
    refined.reserve(loop.size());
    for (std::size_t e = 0; e < loop.size(); ++e) {
      const int u = loop[e];
      const int w = loop[(e + 1) % loop.size()];
      refined.push_back(u);
      const Vec2 a = verts[u];
      const Vec2 b = verts[w];
      const Vec2 ab = b - a;
      const double len2 = ab.squaredNorm();
      if (len2 == 0.0) continue;
      const auto x0 = static_cast<std::int64_t>(std::floor((std::min(a.x(), b.x()) - tol - box.lo.x()) / h));
      const auto x1 = static_cast<std::int64_t>(std::floor((std::max(a.x(), b.x()) + tol - box.lo.x()) / h));
      const auto y0 = static_cast<std::int64_t>(std::floor((std::min(a.y(), b.y()) - tol - box.lo.y()) / h));
      const auto y1 = static_cast<std::int64_t>(std::floor((std::max(a.y(), b.y()) + tol - box.lo.y()) / h));
      std::vector<std::pair<double, int>> hits;
      for (auto ix = x0; ix <= x1; ++ix) {
        for (auto iy = y0; iy <= y1; ++iy) {
          auto it = grid.find(bucket_key(ix, iy));
          if (it == grid.end()) continue;
          for (int v : it->second) {
            if (v == u || v == w) continue;
            const double t = (verts[v] - a).dot(ab) / len2;
            if (t <= 0.0 || t >= 1.0) continue;
            if (std::abs(cross(ab, verts[v] - a)) / std::sqrt(len2) > tol) continue;
            hits.emplace_back(t, v);
          }
        }
      }
      std::sort(hits.begin(), hits.end());
      for (const auto& [t, v] : hits) {
        if (refined.back() != v) refined.push_back(v);
      }
    }
    loop = std::move(refined);
  }
}

std::vector<std::vector<int>> boundary_loops(const std::vector<std::vector<int>>& loops,
                                             const std::vector<Vec2>& vertices) {
  // Directed edge multiset, in input order for determinism.
  std::vector<std::pair<int, int>> edges;
  std::map<std::pair<int, int>, int> count;
  for (const auto& loop : loops) {
    for (std::size_t e = 0; e < loop.size(); ++e) {
      const std::pair<int, int> d{loop[e], loop[(e + 1) % loop.size()]};
      edges.push_back(d);
      ++count[d];
    }
  }
  // Cancel opposite pairs.
  std::map<std::pair<int, int>, int> remaining;
  for (const auto& [d, c] : count) {
    const auto it = count.find({d.second, d.first});
    const int opposite = it == count.end() ? 0 : it->second;
    const int left = c - std::min(c, opposite);
    if (left > 0) remaining[d] = left;
  }

  std::unordered_map<int, std::vector<int>> outgoing;
  for (const auto& d : edges) {
    auto it = remaining.find(d);
    if (it == remaining.end() || it->second == 0) continue;
    --it->second;
    outgoing[d.first].push_back(d.second);
  }
  std::vector<std::pair<int, int>> order;
  for (const auto& d : edges) order.push_back(d);

  std::vector<std::vector<int>> result;
  auto take = [&](int from, int to) {
    auto& out = outgoing[from];
    auto it = std::find(out.begin(), out.end(), to);
    if (it == out.end()) return false;
    out.erase(it);
    return true;
  };

  for (const auto& start : order) {
    if (!take(start.first, start.second)) continue;
    std::vector<int> loop{start.first};
    int prev = start.first;
    int cur = start.second;
    while (cur != start.first) {
      loop.push_back(cur);
      auto& out = outgoing[cur];
      if (out.empty()) throw MeshError("boundary walk hit an open chain");
      int next = out.front();
      if (out.size() > 1) {
        const Vec2 din = vertices[cur] - vertices[prev];
        double best = -10.0;
        for (int cand : out) {
          const Vec2 dout = vertices[cand] - vertices[cur];
          const double theta = std::atan2(cross(din, dout), din.dot(dout));
          if (theta > best) {
            best = theta;
            next = cand;
          }
        }
      }
      take(cur, next);
      prev = cur;
      cur = next;
    }
    result.push_back(std::move(loop));
  }
  return result;
}

PolytopicMesh compact_mesh(const std::vector<Vec2>& vertices, std::vector<std::vector<int>> cells) {
  std::vector<int> remap(vertices.size(), -1);
  std::vector<Vec2> used;
  for (auto& loop : cells) {
    for (int& v : loop) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(used.size());
        used.push_back(vertices[v]);
      }
      v = remap[v];
    }
  }
  return PolytopicMesh(std::move(used), std::move(cells));
}

}  // namespace dgschwarz::detail
