#include "dgschwarz/assembly.hpp"
#include "dgschwarz/generation.hpp"
#include "dgschwarz/harness.hpp"
#include "dgschwarz/mesh_io.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>

namespace py = pybind11;
using namespace dgschwarz;

namespace {

// pybind11 holders cannot be pointers to const; meshes are never mutated through them.
using MeshPtr = std::shared_ptr<PolytopicMesh>;

MeshPtr share(PolytopicMesh mesh) { return std::make_shared<PolytopicMesh>(std::move(mesh)); }

Eigen::MatrixX2d vertex_array(const PolytopicMesh& mesh) {
  Eigen::MatrixX2d out(mesh.n_vertices(), 2);
  for (int i = 0; i < mesh.n_vertices(); ++i) out.row(i) = mesh.vertices()[i].transpose();
  return out;
}

MeshPtr mesh_from_arrays(const Eigen::MatrixX2d& vertices, std::vector<std::vector<int>> cells) {
  std::vector<Vec2> v(vertices.rows());
  for (Eigen::Index i = 0; i < vertices.rows(); ++i) v[i] = vertices.row(i).transpose();
  return share(PolytopicMesh(std::move(v), std::move(cells)));
}

MeshPtr voronoi(int n, std::uint64_t seed, int lloyd, const std::string& domain) {
  Domain d;
  if (domain == "square") {
    d = Domain::unit_square();
  } else if (domain == "lshape") {
    d = Domain::unit_lshape();
  } else {
    throw ConfigError("domain must be square or lshape");
  }
  return share(generate_voronoi(random_seeds(d, n, seed), d, lloyd));
}

py::tuple agglomerate_mesh(const PolytopicMesh& mesh, int parts) {
  const Partition part = agglomerate(mesh, parts, AgglomerationMethod::coordinate_bisection);
  return py::make_tuple(share(coarsen(mesh, part).mesh), part.part_of);
}

SparseMatrix sipdg(const MeshPtr& mesh, int p, const std::vector<double>& rho, double c_sigma) {
  const DGSpace space(mesh, p);
  const DiffusionField field = rho.empty() ? DiffusionField::constant(mesh->n_cells(), 1.0) : DiffusionField(rho);
  return assemble_sipdg(space, field, c_sigma);
}

py::dict to_dict(const SolveResult& r) {
  py::dict d;
  d["solution"] = r.solution;
  d["residual_history"] = r.residual_history;
  d["iterations"] = r.iterations;
  d["K"] = r.K;
  d["lambda_min"] = r.lambda_min;
  d["lambda_max"] = r.lambda_max;
  d["nested"] = r.nested;
  d["coloring"] = r.coloring;
  d["rho_ratio"] = r.rho_ratio;
  d["stats"] = r.stats_json;
  return d;
}

py::dict solve(const MeshPtr& fine, const MeshPtr& coarse, int p, int q, const std::vector<double>& rho,
               const Eigen::VectorXd& b, double c_sigma, double tol, double estimate_tol, int maxit,
               std::optional<std::vector<int>> subdomains, bool use_local, bool force_intersection) {
  TwoLevelProblem prob;
  prob.fine = fine;
  prob.coarse = coarse;
  prob.p = p;
  prob.q = q > 0 ? q : p;
  prob.c_sigma = c_sigma;
  prob.rho = rho;
  if (subdomains) prob.subdomains = make_partition(*fine, *subdomains);
  prob.use_local = use_local;
  prob.force_intersection = force_intersection;
  SolveResult r;
  {
    py::gil_scoped_release release;
    r = solve_two_level(prob, b, SolveOptions{tol, estimate_tol, maxit});
  }
  return to_dict(r);
}

py::dict run(const std::string& config_text, int threads) {
  const ExperimentConfig cfg = parse_config(config_text);
  ResultsTable table;
  {
    py::gil_scoped_release release;
    table = run_experiment(cfg, RunOptions{threads, nullptr});
  }
  py::dict d;
  d["csv"] = results_csv(table);
  d["summary"] = summary_json(table);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "hp-DG discretization and two-level Schwarz preconditioning on polygonal meshes";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<MeshError>(m, "MeshError", PyExc_ValueError);

  py::class_<PolytopicMesh, MeshPtr>(m, "Mesh")
      .def(py::init(&mesh_from_arrays), py::arg("vertices"), py::arg("cells"))
      .def_property_readonly("n_cells", &PolytopicMesh::n_cells)
      .def_property_readonly("n_vertices", &PolytopicMesh::n_vertices)
      .def_property_readonly("h", &PolytopicMesh::mesh_size)
      .def_property_readonly("area", &PolytopicMesh::total_area)
      .def_property_readonly("vertices", &vertex_array)
      .def_property_readonly("cells", &PolytopicMesh::cells)
      .def("cell_area", &PolytopicMesh::cell_area)
      .def("cell_diameter", &PolytopicMesh::cell_diameter)
      .def("__repr__", [](const PolytopicMesh& mesh) {
        return "<Mesh " + std::to_string(mesh.n_cells()) + " cells>";
      });

  m.def("quad_grid", [](int n) { return share(quad_grid(n)); }, py::arg("n"));
  m.def("voronoi", &voronoi, py::arg("n"), py::arg("seed") = 1, py::arg("lloyd") = 3,
        py::arg("domain") = "square");
  m.def("lshape16", [](std::uint64_t seed) { return share(lshape_voronoi16(seed)); }, py::arg("seed") = 1);
  m.def("refine_cells",
        [](const PolytopicMesh& coarse, int k, std::uint64_t seed, int lloyd) {
          return share(refine_cells(coarse, k, seed, lloyd));
        },
        py::arg("coarse"), py::arg("cells_per_coarse"), py::arg("seed") = 1, py::arg("lloyd") = 3);
  m.def("agglomerate", &agglomerate_mesh, py::arg("mesh"), py::arg("parts"),
        "Coordinate-bisection agglomeration; returns (coarse mesh, part of each fine cell).");
  m.def("read_mesh", [](const std::filesystem::path& p) { return share(read_mesh_json(p)); });
  m.def("write_mesh", &write_mesh_json);

  m.def("assemble_sipdg", &sipdg, py::arg("mesh"), py::arg("p"), py::arg("rho") = std::vector<double>{},
        py::arg("c_sigma") = kDefaultPenalty, "SIPDG stiffness matrix as a scipy.sparse matrix.");
  m.def("solve_two_level", &solve, py::arg("fine"), py::arg("coarse") = nullptr, py::arg("p") = 1,
        py::arg("q") = 0, py::arg("rho") = std::vector<double>{}, py::arg("b") = Eigen::VectorXd(),
        py::arg("c_sigma") = kDefaultPenalty, py::arg("tol") = 1e-8, py::arg("estimate_tol") = 1e-14,
        py::arg("maxit") = 0, py::arg("subdomains") = py::none(), py::arg("use_local") = true,
        py::arg("force_intersection") = false,
        "Schwarz-preconditioned CG; q = 0 means q = p and coarse = None drops the coarse solve.");
  m.def("solve_unpreconditioned",
        [](const MeshPtr& mesh, int p, const Eigen::VectorXd& b, double c_sigma, double tol) {
          return to_dict(solve_unpreconditioned(mesh, p, c_sigma, b, SolveOptions{tol, 1e-14, 0}));
        },
        py::arg("mesh"), py::arg("p") = 1, py::arg("b") = Eigen::VectorXd(), py::arg("c_sigma") = kDefaultPenalty,
        py::arg("tol") = 1e-8);
  m.def("random_rhs", &random_rhs, py::arg("n"), py::arg("seed"));

  m.def("default_config", [](const std::string& id) { return format_config(default_config(id)); },
        "Built-in configuration of an experiment as INI text.");
  m.def("run_experiment", &run, py::arg("config"), py::arg("threads") = 1,
        "Runs an experiment from INI text; returns {'csv': ..., 'summary': ...}.");
  m.def("fit_loglog_slope", &fit_loglog_slope);
}
