#pragma once

#include "dgschwarz/basis.hpp"
#include "dgschwarz/partition.hpp"

#include <Eigen/Sparse>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

namespace dgschwarz {

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Piecewise constant diffusion coefficient, one value per fine cell.
/// Values are scaled so that min rho >= 1.
class DiffusionField {
 public:
  DiffusionField() = default;
  explicit DiffusionField(std::vector<double> rho);
  static DiffusionField constant(int n_cells, double value = 1.0);

  double operator[](int cell) const { return rho_[cell]; }
  const std::vector<double>& values() const { return rho_; }
  int size() const { return static_cast<int>(rho_.size()); }

 private:
  std::vector<double> rho_;
};

/// Per-face penalty data.
struct FacePenalty {
  std::vector<double> sigma;
  std::vector<double> omega;  // weight of the plus side; 1 on boundary faces
  std::vector<double> rho_avg;
  std::vector<double> h_avg;
};

/// 2ab/(a+b) on interior faces, a on boundary faces.
double harmonic_average(double a, std::optional<double> b);

FacePenalty penalty_values(const PolytopicMesh& mesh, const FaceSet& faces, const DiffusionField& rho, int p,
                           double c_sigma);

inline constexpr double kDefaultPenalty = 10.0;

/// SIPDG operator in face form with weak homogeneous Dirichlet conditions.
SparseMatrix assemble_sipdg(const DGSpace& space, const DiffusionField& rho, double c_sigma = kDefaultPenalty);

Eigen::VectorXd assemble_rhs(const DGSpace& space, const ScalarField& f);

/// Block-diagonal L2 mass matrix (the identity up to rounding).
SparseMatrix assemble_mass(const DGSpace& space);

/// G[i, J] = int phi_i psi_J for fine basis phi and coarse basis psi.
SparseMatrix assemble_mixed_mass(const DGSpace& fine, const DGSpace& coarse, const NestingMap& nesting);

enum class LiftingWeight { unit, weighted };

/// Lifting of the jumps of `v`: components (Rx, Ry) as coefficient vectors in V_h.
/// The unit variant uses omega = 1/2 on interior faces.
struct LiftedField {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

LiftedField assemble_lifting(const DGSpace& space, LiftingWeight weight, const DiffusionField& rho,
                             const Eigen::VectorXd& v);

/// A(u, v) evaluated through the lifting operator instead of face fluxes.
double evaluate_lifting_form(const DGSpace& space, const DiffusionField& rho, double c_sigma, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& v);

/// Broken weighted H1 seminorm plus the penalty-weighted jump norm.
double energy_norm(const DGSpace& space, const DiffusionField& rho, double c_sigma, const Eigen::VectorXd& v);

/// MatrixMarket coordinate format.
void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path);

}  // namespace dgschwarz
