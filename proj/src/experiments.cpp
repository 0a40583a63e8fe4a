#include "dgschwarz/generation.hpp"
#include "dgschwarz/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace dgschwarz {

using MeshPtr = std::shared_ptr<const PolytopicMesh>;

double ResultsTable::summary_value(const std::string& name) const {
  for (const auto& s : summary)
    if (s.name == name) return s.value;
  throw std::out_of_range("no summary item " + name);
}

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_loglog_slope: size mismatch");
  if (xs.size() < 2) throw std::invalid_argument("fit_loglog_slope: need at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0 && ys[i] > 0.0)) throw std::invalid_argument("fit_loglog_slope: nonpositive data");
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog_slope: all x values coincide");
  return sxy / sxx;
}

Eigen::VectorXd random_rhs(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd b(n);
  for (auto& x : b) x = u(rng);
  return b;
}

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + 0xbf58476d1ce4e5b9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int square_side(int n) { return static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))); }

MeshPtr make_fine(const std::string& family, int n, std::uint64_t seed, int lloyd) {
  if (family == "quad") return std::make_shared<const PolytopicMesh>(quad_grid(square_side(n)));
  const Domain d = Domain::unit_square();
  return std::make_shared<const PolytopicMesh>(generate_voronoi(random_seeds(d, n, seed), d, lloyd));
}

MeshPtr agglomerated(const PolytopicMesh& fine, int n_parts) {
  const Partition part = agglomerate(fine, n_parts, AgglomerationMethod::coordinate_bisection);
  return std::make_shared<const PolytopicMesh>(coarsen(fine, part).mesh);
}

// Largest vertex-to-vertex distance inside any part.
double partition_diameter(const PolytopicMesh& mesh, const Partition& part) {
  double d = 0.0;
  for (const auto& cells : part.cells_of_part()) {
    std::vector<Vec2> pts;
    for (int k : cells)
      for (int v : mesh.cells()[k]) pts.push_back(mesh.vertices()[v]);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  }
  return d;
}

SolveResult run_pcg(const SparseMatrix& a, const LinearOperator& m, const Eigen::VectorXd& b,
                    const SolveOptions& options) {
  const LinearOperator apply_a = [&a](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = a * x; };
  SolveResult out;
  try {
    PCGOptions po;
    po.tol = options.tol;
    po.maxit = options.maxit;
    const PCGReport rep = pcg(apply_a, m, b, po);
    if (!rep.converged) {
      std::ostringstream msg;
      msg << "PCG did not reach tol " << options.tol << " in " << rep.iterations << " iterations";
      throw SolverError(msg.str());
    }
    out.solution = rep.solution;
    out.residual_history = rep.residual_history;
    out.iterations = rep.iterations;
    out.K = rep.cond_estimate;
    out.lambda_min = rep.lambda_min;
    out.lambda_max = rep.lambda_max;
    if (options.estimate_tol > 0.0 && options.estimate_tol < options.tol && rep.iterations > 0) {
      // Runs past the stopping tolerance enrich the Ritz values; the rerun
      // itself need not converge.
      po.tol = options.estimate_tol;
      const PCGReport fine = pcg(apply_a, m, b, po);
      out.K = fine.cond_estimate;
      out.lambda_min = fine.lambda_min;
      out.lambda_max = fine.lambda_max;
    }
  } catch (const KrylovError& e) {
    throw SolverError(e.what());
  }
  return out;
}

}  // namespace

SolveResult solve_two_level(const TwoLevelProblem& problem, const Eigen::VectorXd& b, const SolveOptions& options) {
  if (!problem.fine) throw ConfigError("solve_two_level: no fine mesh");
  if (problem.coarse && problem.q > problem.p) throw ConfigError("coarse degree q exceeds p");
  const PolytopicMesh& fine = *problem.fine;
  const DGSpace fs(problem.fine, problem.p);
  const DiffusionField rho = problem.rho.empty() ? DiffusionField::constant(fine.n_cells(), 1.0)
                                                 : DiffusionField(problem.rho);
  const SparseMatrix a = assemble_sipdg(fs, rho, problem.c_sigma);
  const Partition sub = problem.subdomains ? *problem.subdomains : identity_partition(fine);

  SolveResult result;
  SparseMatrix q;
  try {
    if (problem.coarse) {
      const NestingMap nesting = nesting_map(fine, *problem.coarse, problem.force_intersection);
      const DGSpace cs(problem.coarse, problem.q);
      q = build_prolongation(fs, cs, nesting);
      result.nested = is_nested(nesting);
      result.rho_ratio = coarse_rho_ratio(nesting, rho, problem.coarse->n_cells());
    }
    const SchwarzPreconditioner pre(a, fs, sub, q, {problem.coarse != nullptr, problem.use_local});
    const Eigen::VectorXd rhs = b.size() ? b : assemble_rhs(fs, [](const Vec2&) { return 1.0; });
    if (rhs.size() != a.rows()) throw ConfigError("right-hand side has the wrong length");
    SolveResult r = run_pcg(a, pre.as_operator(), rhs, options);
    r.nested = result.nested;
    r.rho_ratio = result.rho_ratio;
    r.coloring = pre.stats().coloring;
    r.subdomain_size = problem.subdomains ? partition_diameter(fine, sub) : fine.mesh_size();
    r.stats_json = pre.stats().to_json();
    return r;
  } catch (const SchwarzError& e) {
    throw SolverError(e.what());
  }
}

SolveResult solve_unpreconditioned(const std::shared_ptr<const PolytopicMesh>& mesh, int p, double c_sigma,
                                   const Eigen::VectorXd& b, const SolveOptions& options) {
  const DGSpace fs(mesh, p);
  const SparseMatrix a = assemble_sipdg(fs, DiffusionField::constant(mesh->n_cells(), 1.0), c_sigma);
  const Eigen::VectorXd rhs = b.size() ? b : assemble_rhs(fs, [](const Vec2&) { return 1.0; });
  return run_pcg(a, identity_operator(), rhs, options);
}

namespace {

struct Job {
  std::string description;
  std::function<ResultRow()> run;
};

std::vector<ResultRow> run_jobs(const std::vector<Job>& jobs, const RunOptions& options) {
  std::vector<ResultRow> rows(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto start = std::chrono::steady_clock::now();
      try {
        rows[i] = jobs[i].run();
      } catch (...) {
        errors[i] = std::current_exception();
        continue;
      }
      if (options.log) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::lock_guard lock(log_mutex);
        *options.log << "[" << (i + 1) << "/" << jobs.size() << "] " << jobs[i].description << ": K = " << rows[i].K
                     << ", iters = " << rows[i].iterations << " (" << secs << " s)\n";
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(options.threads, static_cast<int>(jobs.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

SolveOptions solve_options(const ExperimentConfig& cfg) {
  SolveOptions o;
  o.tol = cfg.tol;
  o.estimate_tol = cfg.estimate_tol;
  o.maxit = cfg.maxit;
  return o;
}

int coarse_q(const ExperimentConfig& cfg, int p) { return cfg.coarse_degree > 0 ? cfg.coarse_degree : p; }

// One preconditioned solve with T_HH = T_h.
ResultRow two_level_row(const std::string& experiment, const std::string& fine_id, const std::string& coarse_id,
                        const MeshPtr& fine, const MeshPtr& coarse, int p, int q, std::vector<double> rho,
                        double rho_e, const ExperimentConfig& cfg) {
  TwoLevelProblem prob;
  prob.fine = fine;
  prob.coarse = coarse;
  prob.p = p;
  prob.q = q;
  prob.c_sigma = cfg.c_sigma;
  prob.rho = std::move(rho);
  const Eigen::Index n = static_cast<Eigen::Index>(fine->n_cells()) * polynomial_dim(p);
  const SolveResult r = solve_two_level(prob, random_rhs(n, cfg.seed), solve_options(cfg));
  ResultRow row;
  row.experiment = experiment;
  row.fine_id = fine_id;
  row.coarse_id = coarse_id;
  row.n_fine = fine->n_cells();
  row.n_coarse = coarse->n_cells();
  row.h = fine->mesh_size();
  row.H = coarse->mesh_size();
  row.p = p;
  row.q = q;
  row.rho_e = rho_e;
  row.K = r.K;
  row.iterations = r.iterations;
  BoundInputs in;
  in.p = p;
  in.q = q;
  in.h = row.h;
  in.H = row.H;
  in.H_sub = r.subdomain_size;
  in.n_s = r.coloring;
  in.rho_ratio = r.rho_ratio;
  in.nested = r.nested;
  row.bound_factor = theoretical_bound(in);
  return row;
}

void add_bound_summary(ResultsTable& table, const std::string& prefix) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& r : table.rows) {
    if (r.experiment.rfind(prefix, 0) != 0 || !(r.bound_factor > 0.0)) continue;
    const double c = r.K / r.bound_factor;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  if (hi > 0.0) {
    table.summary.push_back({prefix + "_bound_c_max", hi});
    table.summary.push_back({prefix + "_bound_c_spread", hi / lo});
  }
}

std::string fmt_id(const std::string& family, int n) { return family + std::to_string(n); }

}  // namespace

ResultsTable run_example1(const ExperimentConfig& cfg, const RunOptions& options) {
  validate(cfg);
  if (cfg.experiment != "1") throw ConfigError("run_example1 needs experiment = 1");
  MeshPtr coarse;
  MeshPtr fine;
  std::vector<int> parent;
  if (cfg.family == "lshape_refined") {
    coarse = std::make_shared<const PolytopicMesh>(lshape_voronoi16(cfg.seed));
    fine = std::make_shared<const PolytopicMesh>(refine_cells(*coarse, cfg.fine_sizes[0], mix(cfg.seed, 1), cfg.lloyd_iters));
    parent = std::get<NestedMap>(nesting_map(*fine, *coarse)).parent;
  } else {
    const Domain d = Domain::unit_lshape();
    fine = std::make_shared<const PolytopicMesh>(
        generate_voronoi(random_seeds(d, cfg.fine_sizes[0], mix(cfg.seed, 2)), d, cfg.lloyd_iters));
    const Partition part = agglomerate(*fine, 16, AgglomerationMethod::coordinate_bisection);
    coarse = std::make_shared<const PolytopicMesh>(coarsen(*fine, part).mesh);
    parent = part.part_of;
  }
  const std::string fine_id = fmt_id(cfg.family, fine->n_cells());
  const std::string coarse_id = fmt_id("lshape", coarse->n_cells());

  std::vector<Job> jobs;
  for (RhoLayout layout : cfg.layouts) {
    const std::string label = layout == RhoLayout::coarse_checkerboard ? "example1_aligned"
                              : layout == RhoLayout::fine_checkerboard  ? "example1_notaligned"
                                                                        : "example1_uniform";
    for (int p : cfg.degrees) {
      for (double rho_e : cfg.rho_values) {
        // Even 1-based index gets rho_e, odd gets 1.
        std::vector<double> rho(fine->n_cells(), 1.0);
        for (int k = 0; k < fine->n_cells(); ++k) {
          if (layout == RhoLayout::coarse_checkerboard && parent[k] % 2 == 1) rho[k] = rho_e;
          if (layout == RhoLayout::fine_checkerboard && k % 2 == 1) rho[k] = rho_e;
        }
        jobs.push_back({label + " p=" + std::to_string(p) + " rho_e=" + std::to_string(rho_e), [=, &cfg] {
                          return two_level_row(label, fine_id, coarse_id, fine, coarse, p, coarse_q(cfg, p), rho,
                                               rho_e, cfg);
                        }});
      }
    }
  }
  ResultsTable table{run_jobs(jobs, options), {}};
  for (const std::string label : {"example1_aligned", "example1_notaligned", "example1_uniform"}) {
    for (int p : cfg.degrees) {
      std::vector<double> ks;
      std::vector<double> xs;
      std::vector<double> ys;
      for (const auto& r : table.rows) {
        if (r.experiment != label || r.p != p) continue;
        ks.push_back(r.K);
        if (r.rho_e >= 1e3) {
          xs.push_back(r.rho_e);
          ys.push_back(r.K);
        }
      }
      if (ks.empty()) continue;
      const std::string key = label + "_p" + std::to_string(p);
      table.summary.push_back({key + "_K_ratio", *std::max_element(ks.begin(), ks.end()) /
                                                     *std::min_element(ks.begin(), ks.end())});
      if (xs.size() >= 2) table.summary.push_back({key + "_slope_rho", fit_loglog_slope(xs, ys)});
    }
  }
  add_bound_summary(table, "example1_aligned");
  add_bound_summary(table, "example1_notaligned");
  return table;
}

namespace {

// Shared driver of Examples 2 and 4: a triangular (N_h, N_H) grid.
ResultsTable run_grid(const ExperimentConfig& cfg, const RunOptions& options, bool nested) {
  const std::string label = nested ? "example2" : "example4";
  std::vector<Job> jobs;
  std::map<int, MeshPtr> fines;
  for (int nh : cfg.fine_sizes) {
    fines[nh] = make_fine(cfg.family, nh, mix(cfg.seed, 10, nh), cfg.lloyd_iters);
  }
  std::map<int, MeshPtr> independent;
  if (!nested) {
    const Domain d = Domain::unit_square();
    for (int nc : cfg.coarse_sizes) {
      independent[nc] = std::make_shared<const PolytopicMesh>(
          generate_voronoi(random_seeds(d, nc, mix(cfg.seed, 20, nc)), d, cfg.lloyd_iters));
    }
  }
  for (int nh : cfg.fine_sizes) {
    for (int nc : cfg.coarse_sizes) {
      if (static_cast<long>(nc) * cfg.min_ratio > nh) continue;
      const MeshPtr fine = fines[nh];
      const MeshPtr coarse = nested ? agglomerated(*fine, nc) : independent[nc];
      const std::string fine_id = fmt_id(cfg.family, nh);
      const std::string coarse_id = (nested ? "agglo" : "voronoi") + std::to_string(nc);
      for (int p : cfg.degrees) {
        jobs.push_back({label + " Nh=" + std::to_string(nh) + " NH=" + std::to_string(nc) + " p=" + std::to_string(p),
                        [=, &cfg] {
                          return two_level_row(label, fine_id, coarse_id, fine, coarse, p, coarse_q(cfg, p), {}, 1.0,
                                               cfg);
                        }});
      }
    }
  }
  ResultsTable table{run_jobs(jobs, options), {}};
  for (int p : cfg.degrees) {
    const std::string pk = label + "_p" + std::to_string(p);
    // Fixed N_h / N_H diagonals.
    std::map<int, std::vector<double>> diag;
    for (const auto& r : table.rows)
      if (r.p == p && r.n_coarse > 0) diag[r.n_fine / r.n_coarse].push_back(r.K);
    for (const auto& [ratio, ks] : diag) {
      if (ks.size() < 2) continue;
      table.summary.push_back({pk + "_ratio" + std::to_string(ratio) + "_spread",
                               *std::max_element(ks.begin(), ks.end()) / *std::min_element(ks.begin(), ks.end())});
    }
    // Fixed fine mesh: K against nominal H/h = sqrt(N_h / N_H).
    for (int nh : cfg.fine_sizes) {
      std::vector<double> xs;
      std::vector<double> ys;
      for (const auto& r : table.rows) {
        if (r.p != p || r.n_fine != fines[nh]->n_cells()) continue;
        xs.push_back(std::sqrt(static_cast<double>(r.n_fine) / r.n_coarse));
        ys.push_back(r.K);
      }
      if (xs.size() >= 3) table.summary.push_back({pk + "_Nh" + std::to_string(nh) + "_slope_Hh", fit_loglog_slope(xs, ys)});
    }
  }
  add_bound_summary(table, label);
  return table;
}

}  // namespace

ResultsTable run_example2(const ExperimentConfig& cfg, const RunOptions& options) {
  validate(cfg);
  if (cfg.experiment != "2") throw ConfigError("run_example2 needs experiment = 2");
  return run_grid(cfg, options, true);
}

ResultsTable run_example4(const ExperimentConfig& cfg, const RunOptions& options) {
  validate(cfg);
  if (cfg.experiment != "4") throw ConfigError("run_example4 needs experiment = 4");
  return run_grid(cfg, options, false);
}

ResultsTable run_example5(const ExperimentConfig& cfg, const RunOptions& options) {
  validate(cfg);
  if (cfg.experiment != "5") throw ConfigError("run_example5 needs experiment = 5");
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < cfg.pairs.size(); ++i) {
    const MeshPairSpec pr = cfg.pairs[i];
    const MeshPtr fine = make_fine(pr.family, pr.n_fine, mix(cfg.seed, 30, pr.n_fine), cfg.lloyd_iters);
    MeshPtr coarse;
    if (pr.nested) {
      coarse = agglomerated(*fine, pr.n_coarse);
    } else {
      const Domain d = Domain::unit_square();
      coarse = std::make_shared<const PolytopicMesh>(
          generate_voronoi(random_seeds(d, pr.n_coarse, mix(cfg.seed, 40, pr.n_coarse)), d, cfg.lloyd_iters));
    }
    const std::string label = "example5_" + pr.label();
    for (int p : cfg.degrees) {
      jobs.push_back({label + " p=" + std::to_string(p), [=, &cfg] {
                        return two_level_row(label, fmt_id(pr.family, pr.n_fine),
                                             (pr.nested ? "agglo" : "voronoi") + std::to_string(pr.n_coarse), fine,
                                             coarse, p, coarse_q(cfg, p), {}, 1.0, cfg);
                      }});
    }
  }
  ResultsTable table{run_jobs(jobs, options), {}};
  if (cfg.degrees.size() >= 2) {
    for (const auto& pr : cfg.pairs) {
      const std::string label = "example5_" + pr.label();
      std::vector<double> xs;
      std::vector<double> ys;
      for (const auto& r : table.rows) {
        if (r.experiment != label) continue;
        xs.push_back(r.p);
        ys.push_back(r.K);
      }
      table.summary.push_back({label + "_slope_p", fit_loglog_slope(xs, ys)});
    }
  }
  add_bound_summary(table, "example5");
  return table;
}

ResultsTable run_unpreconditioned(const ExperimentConfig& cfg, const RunOptions& options) {
  validate(cfg);
  if (cfg.experiment != "unprec") throw ConfigError("run_unpreconditioned needs experiment = unprec");
  auto row_for = [&cfg](const std::string& label, const MeshPtr& mesh, int p) {
    const Eigen::Index n = static_cast<Eigen::Index>(mesh->n_cells()) * polynomial_dim(p);
    const SolveResult r = solve_unpreconditioned(mesh, p, cfg.c_sigma, random_rhs(n, cfg.seed), solve_options(cfg));
    ResultRow row;
    row.experiment = label;
    row.fine_id = fmt_id(cfg.family, mesh->n_cells());
    row.n_fine = mesh->n_cells();
    row.h = mesh->mesh_size();
    row.p = p;
    row.q = 0;
    row.K = r.K;
    row.iterations = r.iterations;
    row.bound_factor = std::pow(p, 4) / (row.h * row.h);
    return row;
  };
  std::vector<Job> jobs;
  const int p_h = cfg.degrees.front();
  for (int n : cfg.fine_sizes) {
    const MeshPtr mesh = make_fine(cfg.family, n, mix(cfg.seed, 50, n), cfg.lloyd_iters);
    jobs.push_back({"unprec_h N=" + std::to_string(n), [=] { return row_for("unprec_h", mesh, p_h); }});
  }
  const MeshPtr sweep = make_fine(cfg.family, cfg.sweep_size, mix(cfg.seed, 50, cfg.sweep_size), cfg.lloyd_iters);
  for (int p : cfg.degrees) {
    jobs.push_back({"unprec_p p=" + std::to_string(p), [=] { return row_for("unprec_p", sweep, p); }});
  }
  ResultsTable table{run_jobs(jobs, options), {}};
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> ps;
  std::vector<double> kp;
  for (const auto& r : table.rows) {
    if (r.experiment == "unprec_h") {
      xs.push_back(1.0 / r.h);
      ys.push_back(r.K);
    } else {
      ps.push_back(r.p);
      kp.push_back(r.K);
    }
  }
  table.summary.push_back({"unprec_slope_inv_h", fit_loglog_slope(xs, ys)});
  if (ps.size() >= 2) table.summary.push_back({"unprec_slope_p", fit_loglog_slope(ps, kp)});
  return table;
}

ResultsTable run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  if (cfg.experiment == "1") return run_example1(cfg, options);
  if (cfg.experiment == "2") return run_example2(cfg, options);
  if (cfg.experiment == "4") return run_example4(cfg, options);
  if (cfg.experiment == "5") return run_example5(cfg, options);
  if (cfg.experiment == "unprec") return run_unpreconditioned(cfg, options);
  throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  if (experiment == "1") {
    cfg.family = "lshape_refined";
    cfg.fine_sizes = {16};
    cfg.degrees = {1, 2};
    cfg.layouts = {RhoLayout::coarse_checkerboard, RhoLayout::fine_checkerboard};
    cfg.rho_values = {1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
  } else if (experiment == "2" || experiment == "4") {
    cfg.family = "voronoi";
    cfg.fine_sizes = {64, 256, 1024, 4096};
    cfg.coarse_sizes = {16, 64, 256, 1024};
    cfg.degrees = {1};
  } else if (experiment == "5") {
    cfg.pairs = {parse_pair("quad:256:16:nested"), parse_pair("voronoi:262:16:nested"),
                 parse_pair("quad:256:16:nonnested"), parse_pair("voronoi:262:16:nonnested")};
    cfg.degrees = {1, 2, 3, 4, 5, 6};
  } else if (experiment == "unprec") {
    cfg.family = "quad";
    cfg.fine_sizes = {64, 256, 1024};
    cfg.sweep_size = 64;
    cfg.degrees = {1, 2, 3, 4, 5};
    // Plain CG needs far more than the preconditioned default.
    cfg.maxit = 20000;
  } else {
    throw ConfigError("unknown experiment '" + experiment + "'");
  }
  validate(cfg);
  return cfg;
}

}  // namespace dgschwarz
