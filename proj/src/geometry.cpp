#include "dgschwarz/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace dgschwarz {

bool BoundingBox::overlaps(const BoundingBox& other, double slack) const {
  return lo.x() <= other.hi.x() + slack && other.lo.x() <= hi.x() + slack &&
         lo.y() <= other.hi.y() + slack && other.lo.y() <= hi.y() + slack;
}

double signed_area(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  // Shoelace relative to the first vertex keeps cancellation small for
  // polygons far from the origin.
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    twice += cross(poly[i] - poly[0], poly[i + 1] - poly[0]);
  }
  return 0.5 * twice;
}

Vec2 centroid(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n == 0) return Vec2::Zero();
  const Vec2 origin = poly[0];
  double twice_area = 0.0;
  Vec2 acc = Vec2::Zero();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 a = poly[i] - origin;
    const Vec2 b = poly[i + 1] - origin;
    const double w = cross(a, b);
    twice_area += w;
    acc += w * (a + b) / 3.0;
  }
  if (std::abs(twice_area) == 0.0) {
    Vec2 mean = Vec2::Zero();
    for (const auto& p : poly) mean += p;
    return mean / static_cast<double>(n);
  }
  return origin + acc / twice_area;
}

BoundingBox bounding_box(std::span<const Vec2> poly) {
  BoundingBox box;
  if (poly.empty()) return box;
  box.lo = poly[0];
  box.hi = poly[0];
  for (const auto& p : poly) {
    box.lo = box.lo.cwiseMin(p);
    box.hi = box.hi.cwiseMax(p);
  }
  return box;
}

double diameter(std::span<const Vec2> poly) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    for (std::size_t j = i + 1; j < poly.size(); ++j) {
      d2 = std::max(d2, (poly[i] - poly[j]).squaredNorm());
    }
  }
  return std::sqrt(d2);
}

double perimeter(std::span<const Vec2> poly) {
  double len = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    len += (poly[(i + 1) % poly.size()] - poly[i]).norm();
  }
  return len;
}

bool is_convex(std::span<const Vec2> poly, double rel_tol) {
  const std::size_t n = poly.size();
  if (n < 3 || signed_area(poly) <= 0.0) return false;
  const double scale = diameter(poly);
  const double tol = rel_tol * scale * scale;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& prev = poly[(i + n - 1) % n];
    const Vec2& cur = poly[i];
    const Vec2& next = poly[(i + 1) % n];
    if (cross(cur - prev, next - cur) < -tol) return false;
  }
  return true;
}

Polygon clip_halfplane(const Polygon& poly, const Vec2& normal, double offset) {
  const std::size_t n = poly.size();
  if (n == 0) return {};
  std::vector<double> dist(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = normal.dot(poly[i]) - offset;
    scale = std::max(scale, std::abs(dist[i]));
  }
  // Snap near-zero distances so that vertices on the clip line are kept
  // exactly and no sliver intersections are generated.
  const double tol = 1e-13 * scale;
  for (auto& d : dist) {
    if (std::abs(d) <= tol) d = 0.0;
  }

  Polygon out;
  out.reserve(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double di = dist[i];
    const double dj = dist[j];
    if (di <= 0.0) out.push_back(poly[i]);
    if ((di < 0.0 && dj > 0.0) || (di > 0.0 && dj < 0.0)) {
      const double t = di / (di - dj);
      out.push_back(poly[i] + t * (poly[j] - poly[i]));
    }
  }
  if (out.size() < 3) return {};
  return out;
}

Polygon convex_intersection(const Polygon& a, const Polygon& b) {
  if (!is_convex(a) || !is_convex(b)) {
    throw GeometryError("convex_intersection: inputs must be convex and counter-clockwise");
  }
  Polygon result = a;
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n && !result.empty(); ++i) {
    const Vec2 edge = b[(i + 1) % n] - b[i];
    if (edge.squaredNorm() == 0.0) continue;
    const Vec2 outward(edge.y(), -edge.x());
    result = clip_halfplane(result, outward, outward.dot(b[i]));
  }
  const double min_area = std::min(signed_area(a), signed_area(b));
  const double scale = std::max(diameter(a), diameter(b));
  result = remove_duplicate_vertices(result, 1e-14 * scale);
  if (result.size() < 3 || signed_area(result) < 1e-12 * min_area) return {};
  return result;
}

double distance_to_segment(const Vec2& x, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (x - a).norm();
  const double t = std::clamp((x - a).dot(ab) / len2, 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

bool contains(std::span<const Vec2> poly, const Vec2& x, double slack) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& pi = poly[i];
    const Vec2& pj = poly[j];
    if (slack > 0.0 && distance_to_segment(x, pj, pi) <= slack) return true;
    if ((pi.y() > x.y()) != (pj.y() > x.y())) {
      const double xs = pj.x() + (x.y() - pj.y()) * (pi.x() - pj.x()) / (pi.y() - pj.y());
      if (x.x() < xs) inside = !inside;
    }
  }
  return inside;
}

Polygon remove_duplicate_vertices(const Polygon& poly, double tol) {
  Polygon out;
  out.reserve(poly.size());
  for (const auto& p : poly) {
    if (out.empty() || (p - out.back()).norm() > tol) out.push_back(p);
  }
  while (out.size() > 1 && (out.front() - out.back()).norm() <= tol) out.pop_back();
  return out;
}

}  // namespace dgschwarz
