#include "dgschwarz/generation.hpp"
#include "dgschwarz/harness.hpp"
#include "dgschwarz/mesh_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace dgschwarz;

namespace {

constexpr int kConfigError = 2;
constexpr int kSolverError = 3;

struct GenArgs {
  std::string family = "voronoi";
  int n = 64;
  std::uint64_t seed = 1;
  int lloyd = 3;
  std::string out;
};

struct AggloArgs {
  std::string mesh;
  int parts = 4;
  std::string partition_file;
  std::string out;
  std::string partition_out;
};

struct SolveArgs {
  std::string mesh;
  std::string coarse;
  std::string partition;
  int p = 1;
  int q = 0;
  double rho = 1.0;
  double c_sigma = kDefaultPenalty;
  double tol = 1e-8;
  double estimate_tol = 1e-14;
  bool force_intersection = false;
  std::string out = ".";
};

struct ExperimentArgs {
  std::string id;
  std::string config;
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string out;
  int threads = 1;
};

Partition read_partition(const PolytopicMesh& mesh, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read partition file " + path);
  std::vector<int> part;
  for (int v; in >> v;) part.push_back(v);
  if (static_cast<int>(part.size()) != mesh.n_cells()) throw ConfigError("partition file does not match the mesh");
  return make_partition(mesh, part);
}

PolytopicMesh load_mesh(const std::string& path) {
  if (!fs::exists(path)) throw ConfigError("mesh file " + path + " does not exist");
  return read_mesh_json(path);
}

void run_gen(const GenArgs& a) {
  PolytopicMesh mesh;
  if (a.family == "voronoi") {
    const Domain d = Domain::unit_square();
    mesh = generate_voronoi(random_seeds(d, a.n, a.seed), d, a.lloyd);
  } else if (a.family == "lshape") {
    const Domain d = Domain::unit_lshape();
    mesh = generate_voronoi(random_seeds(d, a.n, a.seed), d, a.lloyd);
  } else if (a.family == "quad") {
    mesh = generate_structured(StructuredKind::quad, static_cast<std::uint64_t>(a.n));
  } else if (a.family == "lshape16") {
    mesh = lshape_voronoi16(a.seed);
  } else {
    throw ConfigError("unknown mesh family " + a.family);
  }
  write_mesh_json(mesh, a.out);
  std::cout << "wrote " << a.out << " (" << mesh.n_cells() << " cells)\n";
}

void run_agglomerate(const AggloArgs& a) {
  const PolytopicMesh mesh = load_mesh(a.mesh);
  const Partition part = a.partition_file.empty()
                             ? agglomerate(mesh, a.parts, AgglomerationMethod::coordinate_bisection)
                             : agglomerate(mesh, a.parts, AgglomerationMethod::from_file, a.partition_file);
  const CoarseMesh coarse = coarsen(mesh, part);
  write_mesh_json(coarse.mesh, a.out);
  if (!a.partition_out.empty()) write_partition_file(part, a.partition_out);
  std::cout << "wrote " << a.out << " (" << coarse.mesh.n_cells() << " cells)\n";
}

void run_info(const std::string& path) {
  const PolytopicMesh mesh = load_mesh(path);
  const FaceSet faces = extract_topology(mesh);
  nlohmann::ordered_json j;
  j["cells"] = mesh.n_cells();
  j["vertices"] = mesh.n_vertices();
  j["interior_faces"] = faces.n_interior;
  j["boundary_faces"] = faces.n_boundary;
  j["h"] = mesh.mesh_size();
  j["area"] = mesh.total_area();
  std::cout << j.dump(2) << "\n";
}

void run_solve(const SolveArgs& a) {
  TwoLevelProblem prob;
  prob.fine = std::make_shared<const PolytopicMesh>(load_mesh(a.mesh));
  if (!a.coarse.empty()) prob.coarse = std::make_shared<const PolytopicMesh>(load_mesh(a.coarse));
  if (!a.partition.empty()) prob.subdomains = read_partition(*prob.fine, a.partition);
  prob.p = a.p;
  prob.q = a.q > 0 ? a.q : a.p;
  if (prob.q > prob.p) throw ConfigError("q must not exceed p");
  prob.c_sigma = a.c_sigma;
  prob.rho.assign(prob.fine->n_cells(), a.rho);
  prob.force_intersection = a.force_intersection;
  SolveOptions opt;
  opt.tol = a.tol;
  opt.estimate_tol = a.estimate_tol;
  const auto start = std::chrono::steady_clock::now();
  const SolveResult r = solve_two_level(prob, {}, opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  fs::create_directories(a.out);
  {
    std::ofstream csv(fs::path(a.out) / "residuals.csv");
    csv << "iter,relres\n";
    csv.precision(17);
    for (std::size_t k = 0; k < r.residual_history.size(); ++k) csv << k << ',' << r.residual_history[k] << '\n';
  }
  nlohmann::ordered_json j;
  j["iterations"] = r.iterations;
  j["K"] = r.K;
  j["lambda_min"] = r.lambda_min;
  j["lambda_max"] = r.lambda_max;
  j["nested"] = r.nested;
  j["setup"] = nlohmann::json::parse(r.stats_json);
  j["seconds"] = secs;
  std::ofstream(fs::path(a.out) / "solve.json") << j.dump(2) << "\n";
  std::cout << j.dump(2) << "\n";
}

void run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg = a.config.empty() ? default_config(a.id) : read_config(a.config);
  if (cfg.experiment != a.id) {
    throw ConfigError("config describes experiment " + cfg.experiment + " but " + a.id + " was requested");
  }
  if (a.seed_given) cfg.seed = a.seed;
  validate(cfg);
  if (a.threads < 1) throw ConfigError("--threads must be >= 1");
  const fs::path out(a.out);
  fs::create_directories(out);
  RunOptions opt;
  opt.threads = a.threads;
  opt.log = &std::cerr;
  const auto start = std::chrono::steady_clock::now();
  const ResultsTable table = run_experiment(cfg, opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_results(table, out / cfg.output);
  std::ofstream(out / "summary.json", std::ios::binary) << summary_json(table);
  write_config(cfg, out / "config.ini");
  if (cfg.plots) write_plots(table, out);
  std::cout << summary_json(table);
  std::cerr << "experiment " << cfg.experiment << " finished in " << secs << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hp-DG two-level Schwarz solver and experiment driver"};
  app.require_subcommand(1);

  auto* mesh = app.add_subcommand("mesh", "mesh generation and inspection");
  mesh->require_subcommand(1);
  GenArgs gen;
  auto* gen_cmd = mesh->add_subcommand("gen", "generate a mesh");
  gen_cmd->add_option("--family", gen.family, "voronoi | lshape | quad | lshape16")->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "cells (Voronoi) or cells per side (quad)")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--lloyd", gen.lloyd, "Lloyd iterations")->capture_default_str();
  gen_cmd->add_option("--out", gen.out)->required();

  AggloArgs agg;
  auto* agg_cmd = mesh->add_subcommand("agglomerate", "agglomerate a mesh into a coarse mesh");
  agg_cmd->add_option("--mesh", agg.mesh)->required();
  agg_cmd->add_option("--parts", agg.parts)->capture_default_str();
  agg_cmd->add_option("--partition-file", agg.partition_file, "read the assignment instead of bisecting");
  agg_cmd->add_option("--out", agg.out)->required();
  agg_cmd->add_option("--partition-out", agg.partition_out);

  std::string info_path;
  auto* info_cmd = mesh->add_subcommand("info", "print mesh statistics");
  info_cmd->add_option("mesh", info_path)->required();

  SolveArgs sol;
  auto* solve_cmd = app.add_subcommand("solve", "solve -div(rho grad u) = 1 with Schwarz-preconditioned CG");
  solve_cmd->add_option("--mesh", sol.mesh)->required();
  solve_cmd->add_option("--coarse", sol.coarse, "coarse mesh; omit for one-level");
  solve_cmd->add_option("--partition", sol.partition, "subdomain file; default one subdomain per cell");
  solve_cmd->add_option("--p", sol.p)->capture_default_str();
  solve_cmd->add_option("--q", sol.q, "coarse degree, 0 for q = p")->capture_default_str();
  solve_cmd->add_option("--rho", sol.rho)->capture_default_str();
  solve_cmd->add_option("--c-sigma", sol.c_sigma)->capture_default_str();
  solve_cmd->add_option("--tol", sol.tol)->capture_default_str();
  solve_cmd->add_option("--estimate-tol", sol.estimate_tol)->capture_default_str();
  solve_cmd->add_flag("--force-intersection", sol.force_intersection);
  solve_cmd->add_option("--out", sol.out)->capture_default_str();

  ExperimentArgs ex;
  auto* ex_cmd = app.add_subcommand("experiment", "run an experiment family");
  ex_cmd->add_option("id", ex.id, "1 | 2 | 4 | 5 | unprec")->required()->check(CLI::IsMember({"1", "2", "4", "5", "unprec"}));
  ex_cmd->add_option("--config", ex.config, "INI file; built-in defaults when omitted");
  auto* seed_opt = ex_cmd->add_option("--seed", ex.seed);
  ex_cmd->add_option("--out", ex.out)->required();
  ex_cmd->add_option("--threads", ex.threads)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  ex.seed_given = seed_opt->count() > 0;

  try {
    if (*gen_cmd) run_gen(gen);
    if (*agg_cmd) run_agglomerate(agg);
    if (*info_cmd) run_info(info_path);
    if (*solve_cmd) run_solve(sol);
    if (*ex_cmd) run_experiment_cmd(ex);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const MeshError& e) {
    std::cerr << "mesh error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
