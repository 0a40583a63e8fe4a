#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <vector>

namespace dgschwarz {

/// Indefinite operator, non-finite recurrence scalar or a failed dense eigensolve.
class KrylovError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// y = Op(x). The output vector is resized by the callee.
using LinearOperator = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

LinearOperator identity_operator();

struct PCGOptions {
  double tol = 1e-8;
  /// Non-positive selects 20 sqrt(n) + 200.
  int maxit = 0;
};

struct PCGReport {
  Eigen::VectorXd solution;
  int iterations = 0;
  bool converged = false;
  /// ||b - A x_k|| / ||b|| for k = 0..iterations.
  std::vector<double> residual_history;
  std::vector<double> alphas;
  std::vector<double> betas;
  /// Extreme Ritz values of the preconditioned operator; NaN when no step was taken.
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double cond_estimate = 0.0;
};

int default_maxit(Eigen::Index n);

/// Preconditioned conjugate gradients from x0 = 0 with the Euclidean
/// relative residual as stopping test. Fills the Lanczos estimate on exit.
PCGReport pcg(const LinearOperator& apply_a, const LinearOperator& apply_m, const Eigen::VectorXd& b,
              const PCGOptions& options = {});

struct SpectrumEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double condition = 0.0;
};

/// Extreme eigenvalues of the Lanczos tridiagonal built from CG coefficients.
/// `betas` holds at least alphas.size() - 1 entries; extra entries are ignored.
SpectrumEstimate lanczos_condition_estimate(const std::vector<double>& alphas, const std::vector<double>& betas);

/// Smallest and largest eigenvalue of a symmetric tridiagonal matrix by
/// Sturm-sequence bisection.
std::pair<double, double> tridiagonal_extreme_eigenvalues(const std::vector<double>& diag,
                                                          const std::vector<double>& offdiag);

/// Condition number of M^{-1} A from a dense generalized symmetric eigensolve.
SpectrumEstimate dense_condition(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m);

/// CSV with header `iter,relres`.
void write_residual_csv(const PCGReport& report, const std::filesystem::path& path);

}  // namespace dgschwarz
