#include "dgschwarz/schwarz.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dgschwarz {

SparseMatrix build_prolongation(const DGSpace& fine, const DGSpace& coarse, const NestingMap& nesting) {
  SparseMatrix q = assemble_mixed_mass(fine, coarse, nesting);
  // Full column rank <=> Q^T Q positive definite.
  const Eigen::SparseMatrix<double> qtq = Eigen::SparseMatrix<double>(q.transpose()) * Eigen::SparseMatrix<double>(q);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(qtq);
  if (ldlt.info() != Eigen::Success) throw SchwarzError("build_prolongation: Q^T Q factorization failed");
  const Eigen::VectorXd d = ldlt.vectorD();
  const double dmax = qtq.diagonal().maxCoeff();
  if (d.size() > 0 && !(d.minCoeff() > 1e-10 * dmax)) {
    throw SchwarzError("build_prolongation: prolongation is rank deficient (broken overlap data?)");
  }
  return q;
}

CoarseSolver build_coarse_operator(const SparseMatrix& a, const SparseMatrix& q) {
  if (a.rows() != a.cols() || q.rows() != a.rows()) throw SchwarzError("build_coarse_operator: dimension mismatch");
  CoarseSolver c;
  const SparseMatrix aq = a * q;
  c.a0 = SparseMatrix(q.transpose()) * aq;
  // Symmetrize the rounding in the triple product.
  c.a0 = 0.5 * (c.a0 + SparseMatrix(c.a0.transpose()));
  c.a0.prune(0.0);
  c.factor = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
  c.factor->compute(Eigen::SparseMatrix<double>(c.a0));
  if (c.factor->info() != Eigen::Success) {
    throw SchwarzError("build_coarse_operator: coarse operator is not positive definite");
  }
  return c;
}

std::vector<std::vector<int>> subdomain_dofs(const Partition& subdomains, const DGSpace& fine) {
  if (static_cast<int>(subdomains.part_of.size()) != fine.mesh().n_cells()) {
    throw SchwarzError("subdomain partition does not match the fine mesh");
  }
  std::vector<std::vector<int>> dofs(subdomains.n_parts);
  for (int k = 0; k < fine.mesh().n_cells(); ++k) {
    auto& d = dofs[subdomains.part_of[k]];
    for (int i = 0; i < fine.n_local(); ++i) d.push_back(fine.dof_offset(k) + i);
  }
  for (auto& d : dofs) std::sort(d.begin(), d.end());
  return dofs;
}

std::vector<LocalSolver> build_local_solvers(const SparseMatrix& a, const Partition& subdomains, const DGSpace& fine) {
  if (a.rows() != fine.n_dofs()) throw SchwarzError("build_local_solvers: operator does not match the space");
  const auto dofs = subdomain_dofs(subdomains, fine);
  std::vector<int> local_index(a.rows(), -1);
  std::vector<LocalSolver> solvers(dofs.size());
  for (std::size_t s = 0; s < dofs.size(); ++s) {
    const auto& d = dofs[s];
    for (std::size_t i = 0; i < d.size(); ++i) local_index[d[i]] = static_cast<int>(i);
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (SparseMatrix::InnerIterator it(a, d[i]); it; ++it) {
        const int j = local_index[it.col()];
        if (j >= 0) block(i, j) = it.value();
      }
    }
    for (int g : d) local_index[g] = -1;
    solvers[s].dofs = d;
    solvers[s].factor.compute(block);
    if (solvers[s].factor.info() != Eigen::Success) {
      throw SchwarzError("build_local_solvers: block of subdomain " + std::to_string(s) + " is not positive definite");
    }
  }
  return solvers;
}

std::string SchwarzStats::to_json() const {
  nlohmann::json j;
  j["n_dofs"] = n_dofs;
  j["n_subdomains"] = n_subdomains;
  j["min_block"] = min_block;
  j["max_block"] = max_block;
  j["coarse_dim"] = coarse_dim;
  j["N_S"] = coloring;
  j["use_coarse"] = use_coarse;
  j["use_local"] = use_local;
  return j.dump();
}

SchwarzPreconditioner::SchwarzPreconditioner(const SparseMatrix& a, const DGSpace& fine, const Partition& subdomains,
                                             const SparseMatrix& q, SchwarzOptions options)
    : options_(options), n_(a.rows()) {
  if (!options.use_coarse && !options.use_local) throw SchwarzError("preconditioner with no components");
  if (options.use_coarse) {
    if (q.rows() != a.rows()) throw SchwarzError("prolongation does not match the operator");
    q_ = q;
    coarse_ = build_coarse_operator(a, q_);
  }
  if (options.use_local) local_ = build_local_solvers(a, subdomains, fine);
  stats_.n_dofs = static_cast<int>(n_);
  stats_.n_subdomains = options.use_local ? subdomains.n_parts : 0;
  stats_.min_block = std::numeric_limits<int>::max();
  for (const auto& l : local_) {
    stats_.min_block = std::min(stats_.min_block, static_cast<int>(l.dofs.size()));
    stats_.max_block = std::max(stats_.max_block, static_cast<int>(l.dofs.size()));
  }
  if (local_.empty()) stats_.min_block = 0;
  stats_.coarse_dim = options.use_coarse ? static_cast<int>(q_.cols()) : 0;
  stats_.coloring = coloring_bound(fine.mesh(), subdomains);
  stats_.use_coarse = options.use_coarse;
  stats_.use_local = options.use_local;
}

void SchwarzPreconditioner::apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
  if (r.size() != n_) throw SchwarzError("apply: vector has wrong length");
  z = Eigen::VectorXd::Zero(n_);
  if (options_.use_local) {
    Eigen::VectorXd local;
    for (const auto& l : local_) {
      local.resize(static_cast<Eigen::Index>(l.dofs.size()));
      for (std::size_t i = 0; i < l.dofs.size(); ++i) local[i] = r[l.dofs[i]];
      local = l.factor.solve(local);
      for (std::size_t i = 0; i < l.dofs.size(); ++i) z[l.dofs[i]] += local[i];
    }
  }
  if (options_.use_coarse) {
    const Eigen::VectorXd rc = q_.transpose() * r;
    const Eigen::VectorXd zc = coarse_->factor->solve(rc);
    z += q_ * zc;
  }
}

Eigen::VectorXd SchwarzPreconditioner::apply(const Eigen::VectorXd& r) const {
  Eigen::VectorXd z;
  apply(r, z);
  return z;
}

LinearOperator SchwarzPreconditioner::as_operator() const {
  return [this](const Eigen::VectorXd& r, Eigen::VectorXd& z) { apply(r, z); };
}

double theoretical_bound(const BoundInputs& in) {
  const double p = in.p;
  const double q = in.q;
  const double ns = in.n_s + 1.0;
  if (in.nested) {
    return in.rho_ratio * (p * p * in.H / (q * in.h) + p * p * in.H * in.H / (q * q * in.h * in.H_sub)) * ns;
  }
  return std::pow(p, 4) * in.H * in.H / (q * q * in.h * in.h) * ns;
}

double coarse_rho_ratio(const NestingMap& nesting, const DiffusionField& rho, int n_coarse) {
  std::vector<double> lo(n_coarse, std::numeric_limits<double>::infinity());
  std::vector<double> hi(n_coarse, 0.0);
  auto visit = [&](int fine, int coarse) {
    lo[coarse] = std::min(lo[coarse], rho[fine]);
    hi[coarse] = std::max(hi[coarse], rho[fine]);
  };
  if (const auto* nested = std::get_if<NestedMap>(&nesting)) {
    for (std::size_t k = 0; k < nested->parent.size(); ++k) visit(static_cast<int>(k), nested->parent[k]);
  } else {
    for (const auto& o : std::get<NonNestedMap>(nesting).overlaps) visit(o.fine, o.coarse);
  }
  double ratio = 1.0;
  for (int j = 0; j < n_coarse; ++j) {
    if (hi[j] > 0.0) ratio = std::max(ratio, hi[j] / lo[j]);
  }
  return ratio;
}

}  // namespace dgschwarz
