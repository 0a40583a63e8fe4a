#pragma once

#include "dgschwarz/mesh.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace dgschwarz {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Points and positive weights in physical coordinates.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double measure() const;
};

inline constexpr int kMaxQuadratureDegree = 20;

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Collapsed Gauss product rule on the reference triangle (0,0),(1,0),(0,1),
/// exact for total degree <= `degree` (0..20).
const QuadratureRule& simplex_rule(int degree);

QuadratureRule triangle_rule(const Triangle& t, int degree);
/// Composite rule over a set of triangles.
QuadratureRule composite_rule(std::span<const Triangle> triangles, int degree);
QuadratureRule cell_rule(const SubTessellation& subtess, int cell, int degree);
/// Gauss-Legendre rule on the segment [a, b], exact for degree `degree`.
QuadratureRule segment_rule(const Vec2& a, const Vec2& b, int degree);
QuadratureRule face_rule(const Face& face, int degree);

}  // namespace dgschwarz
