#pragma once

#include "dgschwarz/schwarz.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgschwarz {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The tol-level solve did not converge or the Krylov recurrence broke down.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RhoLayout { uniform, coarse_checkerboard, fine_checkerboard };

std::string to_string(RhoLayout layout);
RhoLayout parse_layout(const std::string& name);

/// A fine/coarse mesh pair spec for Example 5, written `family:Nh:NH:mode`
/// with family quad|voronoi and mode nested|nonnested.
struct MeshPairSpec {
  std::string family = "quad";
  int n_fine = 256;
  int n_coarse = 16;
  bool nested = true;

  std::string label() const;
  bool operator==(const MeshPairSpec&) const = default;
};

MeshPairSpec parse_pair(const std::string& text);
std::string to_string(const MeshPairSpec& pair);

struct ExperimentConfig {
  /// 1, 2, 4, 5 or unprec.
  std::string experiment = "2";
  std::uint64_t seed = 1;
  std::string output = "results.csv";

  /// Example 1: lshape_refined | lshape_agglomerated; unprec: quad | voronoi.
  std::string family = "voronoi";
  std::vector<int> fine_sizes;
  std::vector<int> coarse_sizes;
  /// Smallest admissible N_h / N_H in the (N_h, N_H) grids of Examples 2 and 4.
  int min_ratio = 4;
  int lloyd_iters = 3;
  std::vector<MeshPairSpec> pairs;
  /// Cells of the fixed mesh of the unpreconditioned p sweep.
  int sweep_size = 64;

  std::vector<int> degrees{1};
  /// 0 means q = p.
  int coarse_degree = 0;
  double c_sigma = kDefaultPenalty;

  std::vector<RhoLayout> layouts{RhoLayout::uniform};
  std::vector<double> rho_values{1.0};

  double tol = 1e-8;
  double estimate_tol = 1e-14;
  int maxit = 0;
  bool plots = true;

  bool operator==(const ExperimentConfig&) const = default;
};

/// INI file with sections [experiment], [mesh], [discretization],
/// [coefficient], [solver], [output]. Lists are whitespace separated.
/// Throws ConfigError on unknown keys, malformed values or invalid combinations.
ExperimentConfig read_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);
std::string format_config(const ExperimentConfig& cfg);
void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path);
void validate(const ExperimentConfig& cfg);

struct ResultRow {
  std::string experiment;
  std::string fine_id;
  std::string coarse_id;
  int n_fine = 0;
  int n_coarse = 0;
  double h = 0.0;
  double H = 0.0;
  int p = 1;
  int q = 1;
  double rho_e = 1.0;
  double K = 0.0;
  int iterations = 0;
  double bound_factor = 0.0;
};

struct SummaryItem {
  std::string name;
  double value = 0.0;
};

struct ResultsTable {
  std::vector<ResultRow> rows;
  std::vector<SummaryItem> summary;

  /// Value of a summary item; throws std::out_of_range when missing.
  double summary_value(const std::string& name) const;
};

/// Least-squares slope of log y against log x. Needs at least two points
/// (the harness always passes three or more); throws std::invalid_argument
/// on nonpositive data.
double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct TwoLevelProblem {
  std::shared_ptr<const PolytopicMesh> fine;
  /// Null disables the coarse solve.
  std::shared_ptr<const PolytopicMesh> coarse;
  int p = 1;
  int q = 1;
  double c_sigma = kDefaultPenalty;
  std::vector<double> rho;  // per fine cell; empty means 1
  /// Local-solver partition; empty means one subdomain per fine cell.
  std::optional<Partition> subdomains;
  bool use_local = true;
  bool force_intersection = false;
};

struct SolveResult {
  Eigen::VectorXd solution;
  std::vector<double> residual_history;
  int iterations = 0;
  double K = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool nested = true;
  int coloring = 0;
  /// Largest subdomain diameter of the local-solver partition.
  double subdomain_size = 0.0;
  double rho_ratio = 1.0;
  std::string stats_json;
};

struct SolveOptions {
  double tol = 1e-8;
  /// Tolerance of the rerun feeding the Lanczos estimate; <= 0 skips the rerun.
  double estimate_tol = 1e-14;
  int maxit = 0;
};

/// Assembles A and the preconditioner, solves A x = b with PCG and estimates
/// K(P_ad). `b` empty means the load vector of f = 1. Throws SolverError
/// when the tol-level solve does not converge.
SolveResult solve_two_level(const TwoLevelProblem& problem, const Eigen::VectorXd& b, const SolveOptions& options);

/// Plain CG on A; K is the Lanczos estimate of K(A).
SolveResult solve_unpreconditioned(const std::shared_ptr<const PolytopicMesh>& mesh, int p, double c_sigma,
                                   const Eigen::VectorXd& b, const SolveOptions& options);

/// Deterministic uniform(-1, 1) vector.
Eigen::VectorXd random_rhs(Eigen::Index n, std::uint64_t seed);

struct RunOptions {
  int threads = 1;
  /// Progress lines; null silences them.
  std::ostream* log = nullptr;
};

ResultsTable run_example1(const ExperimentConfig& cfg, const RunOptions& options = {});
ResultsTable run_example2(const ExperimentConfig& cfg, const RunOptions& options = {});
ResultsTable run_example4(const ExperimentConfig& cfg, const RunOptions& options = {});
ResultsTable run_example5(const ExperimentConfig& cfg, const RunOptions& options = {});
ResultsTable run_unpreconditioned(const ExperimentConfig& cfg, const RunOptions& options = {});
ResultsTable run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Built-in configurations matching the acceptance runs.
ExperimentConfig default_config(const std::string& experiment);

inline constexpr const char* kResultsHeader = "experiment,Nh,NH,h,H,p,q,rho_e,K,iters,bound_factor";

std::string results_csv(const ResultsTable& table);
void write_results(const ResultsTable& table, const std::filesystem::path& path);
std::string summary_json(const ResultsTable& table);
/// One log-log SVG chart per experiment label; returns the files written.
std::vector<std::filesystem::path> write_plots(const ResultsTable& table, const std::filesystem::path& dir);

}  // namespace dgschwarz
