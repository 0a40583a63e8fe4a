#pragma once

#include "dgschwarz/assembly.hpp"
#include "dgschwarz/krylov.hpp"
#include "dgschwarz/partition.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgschwarz {

class SchwarzError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix of the L2 prolongation from the coarse space into the fine one.
/// The fine basis is orthonormal, so this is the mixed mass matrix itself.
/// Throws SchwarzError when the columns are numerically dependent.
SparseMatrix build_prolongation(const DGSpace& fine, const DGSpace& coarse, const NestingMap& nesting);

struct CoarseSolver {
  SparseMatrix a0;
  std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> factor;
};

/// A0 = Q^T A Q with a sparse Cholesky factorization.
CoarseSolver build_coarse_operator(const SparseMatrix& a, const SparseMatrix& q);

struct LocalSolver {
  std::vector<int> dofs;  // sorted global dof indices of the subdomain
  Eigen::LLT<Eigen::MatrixXd> factor;
};

/// Dense Cholesky factors of the principal submatrices of A on each subdomain.
std::vector<LocalSolver> build_local_solvers(const SparseMatrix& a, const Partition& subdomains, const DGSpace& fine);

/// Dof indices of the cells in each part, sorted.
std::vector<std::vector<int>> subdomain_dofs(const Partition& subdomains, const DGSpace& fine);

struct SchwarzOptions {
  bool use_coarse = true;
  bool use_local = true;
};

struct SchwarzStats {
  int n_dofs = 0;
  int n_subdomains = 0;
  int min_block = 0;
  int max_block = 0;
  int coarse_dim = 0;
  int coloring = 0;
  bool use_coarse = true;
  bool use_local = true;

  std::string to_json() const;
};

/// Two-level additive Schwarz preconditioner
/// z = Q A0^{-1} Q^T r + sum_i R_i^T A_i^{-1} R_i r.
/// Immutable after construction; apply() may be called concurrently.
class SchwarzPreconditioner {
 public:
  /// `q` may be empty when options.use_coarse is false.
  SchwarzPreconditioner(const SparseMatrix& a, const DGSpace& fine, const Partition& subdomains,
                        const SparseMatrix& q, SchwarzOptions options = {});

  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& r) const;
  LinearOperator as_operator() const;

  const SchwarzStats& stats() const { return stats_; }
  const SparseMatrix& prolongation() const { return q_; }
  const std::optional<CoarseSolver>& coarse() const { return coarse_; }
  const std::vector<LocalSolver>& local() const { return local_; }

 private:
  SchwarzOptions options_;
  Eigen::Index n_ = 0;
  SparseMatrix q_;
  std::optional<CoarseSolver> coarse_;
  std::vector<LocalSolver> local_;
  SchwarzStats stats_;
};

struct BoundInputs {
  int p = 1;
  int q = 1;
  double h = 0.0;
  double H = 0.0;
  double H_sub = 0.0;  // subdomain size of the local-solver partition
  int n_s = 0;
  double rho_ratio = 1.0;
  bool nested = true;
};

/// Bracketed factor of the condition-number bound (hidden constant dropped).
/// Nested: ratio (p^2 H/(q h) + p^2 H^2/(q^2 h H_sub)) (N_S + 1);
/// non-nested: p^4 H^2 / (q^2 h^2) (N_S + 1).
double theoretical_bound(const BoundInputs& in);

/// max_j (max rho / min rho) over the fine cells meeting coarse cell j.
double coarse_rho_ratio(const NestingMap& nesting, const DiffusionField& rho, int n_coarse);

}  // namespace dgschwarz
