#include "dgschwarz/basis.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <string>

namespace dgschwarz {

std::vector<std::pair<int, int>> exponent_table(int p) {
  std::vector<std::pair<int, int>> table;
  table.reserve(polynomial_dim(p));
  for (int d = 0; d <= p; ++d) {
    for (int a = d; a >= 0; --a) table.emplace_back(a, d - a);
  }
  return table;
}

namespace {

// P_0..P_p and derivatives at t.
void legendre(int p, double t, double* v, double* dv) {
  v[0] = 1.0;
  dv[0] = 0.0;
  if (p == 0) return;
  v[1] = t;
  dv[1] = 1.0;
  for (int n = 1; n < p; ++n) {
    v[n + 1] = ((2.0 * n + 1.0) * t * v[n] - n * v[n - 1]) / (n + 1.0);
    dv[n + 1] = dv[n - 1] + (2.0 * n + 1.0) * v[n];
  }
}

constexpr int kMaxDegree = 16;

}  // namespace

void eval_prebasis(int p, const BoundingBox& box, const Vec2& x, double* values, double* dx, double* dy) {
  const Vec2 c = box.center();
  const Vec2 hw = box.half_widths();
  double lx[kMaxDegree + 1];
  double dlx[kMaxDegree + 1];
  double ly[kMaxDegree + 1];
  double dly[kMaxDegree + 1];
  legendre(p, (x.x() - c.x()) / hw.x(), lx, dlx);
  legendre(p, (x.y() - c.y()) / hw.y(), ly, dly);
  int k = 0;
  for (int d = 0; d <= p; ++d) {
    for (int a = d; a >= 0; --a, ++k) {
      const int b = d - a;
      values[k] = lx[a] * ly[b];
      if (dx) dx[k] = dlx[a] * ly[b] / hw.x();
      if (dy) dy[k] = lx[a] * dly[b] / hw.y();
    }
  }
}

DGSpace::DGSpace(std::shared_ptr<const PolytopicMesh> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree), n_local_(polynomial_dim(degree)) {
  if (!mesh_) throw BasisError("DGSpace: null mesh");
  if (degree < 0 || degree > kMaxDegree) {
    throw BasisError("DGSpace: degree " + std::to_string(degree) + " outside [0, " +
                     std::to_string(kMaxDegree) + "]");
  }
  if (2 * degree > kMaxQuadratureDegree) {
    throw BasisError("DGSpace: degree " + std::to_string(degree) + " exceeds the quadrature table");
  }
  subtess_ = subtessellate(*mesh_);
  faces_ = extract_topology(*mesh_);
  coeffs_.resize(mesh_->n_cells());
  const int n = n_local_;
  for (int cell = 0; cell < mesh_->n_cells(); ++cell) {
    const QuadratureRule rule = cell_quadrature(cell, 2 * degree_);
    Eigen::MatrixXd b(rule.size(), n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Eigen::VectorXd row(n);
      eval_prebasis(degree_, mesh_->cell_bbox(cell), rule.points[q], row.data(), nullptr, nullptr);
      b.row(q) = std::sqrt(rule.weights[q]) * row.transpose();
    }
    // Two Cholesky-QR passes; the second one cleans up rounding at high p.
    Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n);
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::MatrixXd bc = b * c;
      const Eigen::MatrixXd gram = bc.transpose() * bc;
      Eigen::LLT<Eigen::MatrixXd> llt(gram);
      if (llt.info() != Eigen::Success || llt.matrixL().toDenseMatrix().diagonal().minCoeff() <= 0.0) {
        throw BasisError("DGSpace: Gram matrix of cell " + std::to_string(cell) + " is not positive definite");
      }
      const Eigen::MatrixXd linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
      c = c * linv.transpose();
    }
    coeffs_[cell] = std::move(c);
  }
}

Eigen::MatrixXd DGSpace::eval(int cell, std::span<const Vec2> points) const {
  Eigen::MatrixXd pre(points.size(), n_local_);
  Eigen::VectorXd row(n_local_);
  for (std::size_t i = 0; i < points.size(); ++i) {
    eval_prebasis(degree_, mesh_->cell_bbox(cell), points[i], row.data(), nullptr, nullptr);
    pre.row(i) = row.transpose();
  }
  return pre * coeffs_[cell];
}

void DGSpace::eval_grad(int cell, std::span<const Vec2> points, Eigen::MatrixXd& dx, Eigen::MatrixXd& dy) const {
  Eigen::MatrixXd values;
  eval_all(cell, points, values, dx, dy);
}

void DGSpace::eval_all(int cell, std::span<const Vec2> points, Eigen::MatrixXd& values, Eigen::MatrixXd& dx,
                       Eigen::MatrixXd& dy) const {
  const auto np = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd v(np, n_local_);
  Eigen::MatrixXd gx(np, n_local_);
  Eigen::MatrixXd gy(np, n_local_);
  Eigen::VectorXd rv(n_local_);
  Eigen::VectorXd rx(n_local_);
  Eigen::VectorXd ry(n_local_);
  for (Eigen::Index i = 0; i < np; ++i) {
    eval_prebasis(degree_, mesh_->cell_bbox(cell), points[i], rv.data(), rx.data(), ry.data());
    v.row(i) = rv.transpose();
    gx.row(i) = rx.transpose();
    gy.row(i) = ry.transpose();
  }
  const Eigen::MatrixXd& c = coeffs_[cell];
  values = v * c;
  dx = gx * c;
  dy = gy * c;
}

Eigen::VectorXd DGSpace::evaluate(const Eigen::VectorXd& u, int cell, std::span<const Vec2> points) const {
  if (u.size() != n_dofs()) throw BasisError("DGSpace::evaluate: coefficient vector has wrong length");
  return eval(cell, points) * u.segment(dof_offset(cell), n_local_);
}

Eigen::VectorXd DGSpace::project(const ScalarField& f) const {
  Eigen::VectorXd u(n_dofs());
  const int deg = std::min(2 * degree_ + 2, kMaxQuadratureDegree);
  for (int cell = 0; cell < mesh_->n_cells(); ++cell) {
    const QuadratureRule rule = cell_quadrature(cell, deg);
    const Eigen::MatrixXd phi = eval(cell, rule.points);
    Eigen::VectorXd fw(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) fw[q] = rule.weights[q] * f(rule.points[q]);
    u.segment(dof_offset(cell), n_local_) = phi.transpose() * fw;
  }
  return u;
}

}  // namespace dgschwarz
