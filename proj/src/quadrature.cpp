#include "dgschwarz/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

namespace dgschwarz {

double QuadratureRule::measure() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

namespace {

/// Returns (P_n(x), P_n'(x)) via the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double pn = n == 0 ? 1.0 : p1;
  const double pnm1 = n <= 1 ? 1.0 : p0;
  return {pn, n * (x * pn - pnm1) / (x * x - 1.0)};
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw QuadratureError("gauss_legendre: need at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton on P_n from Chebyshev-like guesses, then map [-1,1] -> [0,1].
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [pn, dp] = legendre_with_derivative(n, x);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = 0.5 * w;
    weights[n - 1 - i] = 0.5 * w;
  }
}

namespace {

QuadratureRule build_simplex_rule(int degree) {
  // Duffy map (u, v) -> (u, (1-u) v) with Jacobian (1-u); the integrand is
  // of degree degree+1 in u and degree in v.
  const int n = (degree + 2 + 1) / 2;
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.points.reserve(static_cast<std::size_t>(n) * n);
  rule.weights.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = x[i];
      const double v = x[j];
      rule.points.emplace_back(u, (1.0 - u) * v);
      rule.weights.push_back(w[i] * w[j] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace

const QuadratureRule& simplex_rule(int degree) {
  static const std::array<QuadratureRule, kMaxQuadratureDegree + 1> table = [] {
    std::array<QuadratureRule, kMaxQuadratureDegree + 1> t;
    for (int d = 0; d <= kMaxQuadratureDegree; ++d) t[d] = build_simplex_rule(d);
    return t;
  }();
  if (degree < 0 || degree > kMaxQuadratureDegree) {
    throw QuadratureError("simplex_rule: degree " + std::to_string(degree) + " outside [0, " +
                          std::to_string(kMaxQuadratureDegree) + "]");
  }
  return table[degree];
}

QuadratureRule triangle_rule(const Triangle& t, int degree) {
  const QuadratureRule& ref = simplex_rule(degree);
  const Vec2 e1 = t.b - t.a;
  const Vec2 e2 = t.c - t.a;
  const double jac = std::abs(cross(e1, e2));
  QuadratureRule rule;
  rule.points.reserve(ref.size());
  rule.weights.reserve(ref.size());
  for (std::size_t q = 0; q < ref.size(); ++q) {
    rule.points.push_back(t.a + ref.points[q].x() * e1 + ref.points[q].y() * e2);
    rule.weights.push_back(ref.weights[q] * jac);
  }
  return rule;
}

QuadratureRule composite_rule(std::span<const Triangle> triangles, int degree) {
  const QuadratureRule& ref = simplex_rule(degree);
  QuadratureRule rule;
  rule.points.reserve(ref.size() * triangles.size());
  rule.weights.reserve(ref.size() * triangles.size());
  for (const auto& t : triangles) {
    const Vec2 e1 = t.b - t.a;
    const Vec2 e2 = t.c - t.a;
    const double jac = std::abs(cross(e1, e2));
    for (std::size_t q = 0; q < ref.size(); ++q) {
      rule.points.push_back(t.a + ref.points[q].x() * e1 + ref.points[q].y() * e2);
      rule.weights.push_back(ref.weights[q] * jac);
    }
  }
  return rule;
}

QuadratureRule cell_rule(const SubTessellation& subtess, int cell, int degree) {
  return composite_rule(subtess.cells.at(static_cast<std::size_t>(cell)), degree);
}

QuadratureRule segment_rule(const Vec2& a, const Vec2& b, int degree) {
  if (degree < 0) throw QuadratureError("segment_rule: negative degree");
  const int n = degree / 2 + 1;
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(n, x, w);
  const double len = (b - a).norm();
  QuadratureRule rule;
  for (int i = 0; i < n; ++i) {
    rule.points.push_back(a + x[i] * (b - a));
    rule.weights.push_back(w[i] * len);
  }
  return rule;
}

QuadratureRule face_rule(const Face& face, int degree) { return segment_rule(face.a, face.b, degree); }

}  // namespace dgschwarz
