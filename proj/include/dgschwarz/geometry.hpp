#pragma once

#include <Eigen/Core>

#include <span>
#include <stdexcept>
#include <vector>

namespace dgschwarz {

using Vec2 = Eigen::Vector2d;
using Polygon = std::vector<Vec2>;

/// Thrown when an input violates the geometric preconditions of an operation.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundingBox {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{0.0, 0.0};

  Vec2 center() const { return 0.5 * (lo + hi); }
  Vec2 half_widths() const { return 0.5 * (hi - lo); }
  bool overlaps(const BoundingBox& other, double slack = 0.0) const;
};

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(std::span<const Vec2> poly);
Vec2 centroid(std::span<const Vec2> poly);
BoundingBox bounding_box(std::span<const Vec2> poly);
/// Maximum pairwise vertex distance.
double diameter(std::span<const Vec2> poly);
double perimeter(std::span<const Vec2> poly);

/// True for counter-clockwise polygons whose interior angles are all <= pi.
/// Collinear vertices are allowed.
bool is_convex(std::span<const Vec2> poly, double rel_tol = 1e-12);

/// Keeps the part of `poly` with normal.dot(x) <= offset (Sutherland-Hodgman step).
Polygon clip_halfplane(const Polygon& poly, const Vec2& normal, double offset);

/// Intersection of two convex counter-clockwise polygons. Returns an empty
/// polygon when the overlap measure is below 1e-12 * min(|A|, |B|).
Polygon convex_intersection(const Polygon& a, const Polygon& b);

/// Point-in-polygon test that also accepts points within `slack` of the boundary.
bool contains(std::span<const Vec2> poly, const Vec2& x, double slack = 0.0);

double distance_to_segment(const Vec2& x, const Vec2& a, const Vec2& b);

/// Drops consecutive duplicates (within `tol`) including the wrap-around pair.
Polygon remove_duplicate_vertices(const Polygon& poly, double tol);

}  // namespace dgschwarz
