#include "dgschwarz/krylov.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

namespace dgschwarz {

LinearOperator identity_operator() {
  return [](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = x; };
}

int default_maxit(Eigen::Index n) { return static_cast<int>(20.0 * std::sqrt(static_cast<double>(n)) + 200.0); }

namespace {

void require_finite(double value, const char* what, int iteration) {
  if (!std::isfinite(value)) {
    throw KrylovError(std::string("pcg: non-finite ") + what + " at iteration " + std::to_string(iteration));
  }
}

}  // namespace

PCGReport pcg(const LinearOperator& apply_a, const LinearOperator& apply_m, const Eigen::VectorXd& b,
              const PCGOptions& options) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  PCGReport report;
  const Eigen::Index n = b.size();
  report.solution = Eigen::VectorXd::Zero(n);
  if (!b.allFinite()) throw KrylovError("pcg: right-hand side is not finite");
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    report.converged = true;
    report.residual_history.push_back(0.0);
    report.lambda_min = report.lambda_max = report.cond_estimate = nan;
    return report;
  }
  const int maxit = options.maxit > 0 ? options.maxit : default_maxit(n);

  Eigen::VectorXd r = b;
  Eigen::VectorXd z;
  Eigen::VectorXd ap;
  apply_m(r, z);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  require_finite(rz, "preconditioned residual", 0);
  if (rz <= 0.0) throw KrylovError("pcg: preconditioner is not positive definite");
  report.residual_history.push_back(1.0);

  for (int k = 1; k <= maxit; ++k) {
    apply_a(p, ap);
    const double pap = p.dot(ap);
    require_finite(pap, "curvature", k);
    if (pap <= 0.0) throw KrylovError("pcg: operator is not positive definite (p'Ap <= 0)");
    const double alpha = rz / pap;
    require_finite(alpha, "alpha", k);
    report.alphas.push_back(alpha);
    report.solution += alpha * p;
    r -= alpha * ap;
    const double relres = r.norm() / bnorm;
    report.residual_history.push_back(relres);
    report.iterations = k;
    if (relres <= options.tol) {
      report.converged = true;
      break;
    }
    apply_m(r, z);
    const double rz_next = r.dot(z);
    require_finite(rz_next, "preconditioned residual", k);
    if (rz_next <= 0.0) throw KrylovError("pcg: preconditioner is not positive definite");
    const double beta = rz_next / rz;
    report.betas.push_back(beta);
    rz = rz_next;
    p = z + beta * p;
  }

  const SpectrumEstimate est = lanczos_condition_estimate(report.alphas, report.betas);
  report.lambda_min = est.lambda_min;
  report.lambda_max = est.lambda_max;
  report.cond_estimate = est.condition;
  return report;
}

namespace {

// Number of eigenvalues of the tridiagonal strictly below x.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e2, double x) {
  constexpr double tiny = std::numeric_limits<double>::min();
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    q = d[i] - x - (i > 0 ? e2[i - 1] / q : 0.0);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

// k-th smallest eigenvalue (0-based) inside [lo, hi].
double bisect(const std::vector<double>& d, const std::vector<double>& e2, int k, double lo, double hi) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi))) break;
    if (sturm_count(d, e2, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::pair<double, double> tridiagonal_extreme_eigenvalues(const std::vector<double>& diag,
                                                          const std::vector<double>& offdiag) {
  const std::size_t n = diag.size();
  if (n == 0) throw KrylovError("tridiagonal_extreme_eigenvalues: empty matrix");
  if (offdiag.size() + 1 < n) throw KrylovError("tridiagonal_extreme_eigenvalues: too few off-diagonal entries");
  std::vector<double> e2(n - 1);
  // Gershgorin interval.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? std::abs(offdiag[i - 1]) : 0.0;
    const double right = i + 1 < n ? std::abs(offdiag[i]) : 0.0;
    lo = std::min(lo, diag[i] - left - right);
    hi = std::max(hi, diag[i] + left + right);
    if (i + 1 < n) e2[i] = offdiag[i] * offdiag[i];
  }
  const double pad = std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)) + std::numeric_limits<double>::min();
  lo -= pad;
  hi += pad;
  return {bisect(diag, e2, 0, lo, hi), bisect(diag, e2, static_cast<int>(n) - 1, lo, hi)};
}

SpectrumEstimate lanczos_condition_estimate(const std::vector<double>& alphas, const std::vector<double>& betas) {
  const std::size_t k = alphas.size();
  if (k == 0) throw KrylovError("lanczos_condition_estimate: no CG steps recorded");
  if (betas.size() + 1 < k) throw KrylovError("lanczos_condition_estimate: too few beta coefficients");
  std::vector<double> diag(k);
  std::vector<double> off(k - 1);
  for (std::size_t j = 0; j < k; ++j) {
    if (!(alphas[j] > 0.0)) throw KrylovError("lanczos_condition_estimate: nonpositive alpha");
    diag[j] = 1.0 / alphas[j] + (j > 0 ? betas[j - 1] / alphas[j - 1] : 0.0);
    if (j + 1 < k) {
      if (betas[j] < 0.0) throw KrylovError("lanczos_condition_estimate: negative beta");
      off[j] = std::sqrt(betas[j]) / alphas[j];
    }
  }
  const auto [lmin, lmax] = tridiagonal_extreme_eigenvalues(diag, off);
  if (!(lmin > 0.0)) throw KrylovError("lanczos_condition_estimate: nonpositive Ritz value");
  return {lmin, lmax, lmax / lmin};
}

SpectrumEstimate dense_condition(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m) {
  if (a.rows() != a.cols() || m.rows() != m.cols() || a.rows() != m.rows()) {
    throw KrylovError("dense_condition: dimension mismatch");
  }
  const Eigen::MatrixXd as = 0.5 * (a + a.transpose());
  const Eigen::MatrixXd ms = 0.5 * (m + m.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(as, ms, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw KrylovError("dense_condition: eigensolver failed (M not SPD?)");
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmin > 0.0)) throw KrylovError("dense_condition: operator is not positive definite");
  return {lmin, lmax, lmax / lmin};
}

void write_residual_csv(const PCGReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "iter,relres\n";
  out.precision(17);
  for (std::size_t k = 0; k < report.residual_history.size(); ++k) out << k << ',' << report.residual_history[k] << '\n';
}

}  // namespace dgschwarz
