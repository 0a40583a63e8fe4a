#pragma once

#include "dgschwarz/mesh.hpp"
#include "dgschwarz/quadrature.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace dgschwarz {

class BasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ScalarField = std::function<double(const Vec2&)>;

/// Dimension of the total-degree polynomial space P_p in two variables.
inline int polynomial_dim(int p) { return (p + 1) * (p + 2) / 2; }

/// Exponent pairs (a, b) of the pre-basis in storage order: degree by degree,
/// x-power descending within a degree.
std::vector<std::pair<int, int>> exponent_table(int p);

/// Pre-basis P_a(xi) P_b(eta) with Legendre polynomials in the coordinates
/// scaled to the cell bounding box, evaluated at one point. `dx`, `dy` may be null.
void eval_prebasis(int p, const BoundingBox& box, const Vec2& x, double* values, double* dx, double* dy);

/// Discontinuous piecewise polynomials of total degree p on a polygonal mesh.
/// Each cell carries its own physical-frame basis, orthonormal in L2(cell).
/// Cell k owns dofs [k * n_local, (k + 1) * n_local).
class DGSpace {
 public:
  DGSpace(std::shared_ptr<const PolytopicMesh> mesh, int degree);

  const PolytopicMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const PolytopicMesh>& mesh_ptr() const { return mesh_; }
  const SubTessellation& subtessellation() const { return subtess_; }
  const FaceSet& faces() const { return faces_; }
  int degree() const { return degree_; }
  int n_local() const { return n_local_; }
  int n_dofs() const { return n_local_ * mesh_->n_cells(); }
  int dof_offset(int cell) const { return cell * n_local_; }

  /// Pre-basis to orthonormal basis map: phi = prebasis * coefficients(cell).
  const Eigen::MatrixXd& coefficients(int cell) const { return coeffs_[cell]; }

  /// Rows are points, columns local basis functions.
  Eigen::MatrixXd eval(int cell, std::span<const Vec2> points) const;
  void eval_grad(int cell, std::span<const Vec2> points, Eigen::MatrixXd& dx, Eigen::MatrixXd& dy) const;
  /// Values and gradients in one pass.
  void eval_all(int cell, std::span<const Vec2> points, Eigen::MatrixXd& values, Eigen::MatrixXd& dx,
                Eigen::MatrixXd& dy) const;

  /// Value of a global coefficient vector at points of one cell.
  Eigen::VectorXd evaluate(const Eigen::VectorXd& u, int cell, std::span<const Vec2> points) const;

  /// L2 projection onto the space (exact for polynomials of degree <= p).
  Eigen::VectorXd project(const ScalarField& f) const;

  QuadratureRule cell_quadrature(int cell, int degree) const { return cell_rule(subtess_, cell, degree); }

 private:
  std::shared_ptr<const PolytopicMesh> mesh_;
  int degree_ = 0;
  int n_local_ = 1;
  SubTessellation subtess_;
  FaceSet faces_;
  std::vector<Eigen::MatrixXd> coeffs_;
};

}  // namespace dgschwarz
