#include "dgschwarz/generation.hpp"
#include "dgschwarz/schwarz.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

using namespace dgschwarz;

namespace {

using MeshPtr = std::shared_ptr<const PolytopicMesh>;

MeshPtr voronoi(int n, std::uint64_t seed) {
  const Domain d = Domain::unit_square();
  return std::make_shared<const PolytopicMesh>(generate_voronoi(random_seeds(d, n, seed), d, 3));
}

struct NestedPair {
  MeshPtr fine;
  MeshPtr coarse;
  Partition parts;
};

NestedPair nested_pair(int n_fine, int n_coarse, std::uint64_t seed) {
  NestedPair np{voronoi(n_fine, seed), nullptr, {}};
  np.parts = agglomerate(*np.fine, n_coarse, AgglomerationMethod::coordinate_bisection);
  np.coarse = std::make_shared<const PolytopicMesh>(coarsen(*np.fine, np.parts).mesh);
  return np;
}

// Dense M^{-1} = apply(I) column by column.
Eigen::MatrixXd dense_apply(const SchwarzPreconditioner& pre, Eigen::Index n) {
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) out.col(j) = pre.apply(Eigen::VectorXd::Unit(n, j));
  return out;
}

}  // namespace

TEST_CASE("prolongation: coarse = fine gives the identity") {
  const auto mesh = voronoi(15, 1);
  const DGSpace space(mesh, 2);
  const Eigen::MatrixXd q(build_prolongation(space, space, nesting_map(*mesh, *mesh)));
  CHECK((q - Eigen::MatrixXd::Identity(q.rows(), q.cols())).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("prolongation: nested case equals polynomial re-expansion") {
  const auto np = nested_pair(60, 6, 2);
  for (auto [p, qd] : {std::pair{1, 1}, std::pair{3, 2}, std::pair{4, 4}}) {
    const DGSpace fs(np.fine, p);
    const DGSpace cs(np.coarse, qd);
    const SparseMatrix q = build_prolongation(fs, cs, nesting_map(*np.fine, *np.coarse));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Eigen::VectorXd c(cs.n_dofs());
    for (auto& x : c) x = g(rng);
    const Eigen::VectorXd qc = q * c;
    // Oracle: sample the coarse polynomial in each fine cell and fit the fine
    // basis by least squares at scattered points.
    double worst = 0.0;
    for (int k = 0; k < np.fine->n_cells(); ++k) {
      const int parent = np.parts.part_of[k];
      const auto rule = fs.cell_quadrature(k, 2 * p + 2);
      const std::vector<Vec2> pts(rule.points.begin(), rule.points.end());
      const Eigen::VectorXd target = cs.evaluate(c, parent, pts);
      const Eigen::MatrixXd v = fs.eval(k, pts);
      const Eigen::VectorXd a = v.colPivHouseholderQr().solve(target);
      worst = std::max(worst, (a - qc.segment(fs.dof_offset(k), fs.n_local())).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("prolongation reproduces constants") {
  const auto np = nested_pair(50, 5, 4);
  const DGSpace fs(np.fine, 2);
  const DGSpace cs(np.coarse, 1);
  const SparseMatrix q = build_prolongation(fs, cs, nesting_map(*np.fine, *np.coarse));
  const auto one = [](const Vec2&) { return 1.0; };
  CHECK((q * cs.project(one) - fs.project(one)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("prolongation: forced intersection path agrees with the nested path") {
  // The intersection path needs convex coarse cells.
  const auto coarse = std::make_shared<const PolytopicMesh>(quad_grid(3));
  const auto fine = std::make_shared<const PolytopicMesh>(refine_cells(*coarse, 7, 5, 3));
  const DGSpace fs(fine, 2);
  const DGSpace cs(coarse, 2);
  const NestingMap nested = nesting_map(*fine, *coarse);
  REQUIRE(is_nested(nested));
  const NestingMap forced = nesting_map(*fine, *coarse, true);
  REQUIRE_FALSE(is_nested(forced));
  const Eigen::MatrixXd a(build_prolongation(fs, cs, nested));
  const Eigen::MatrixXd b(build_prolongation(fs, cs, forced));
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("prolongation rejects rank-deficient overlap data") {
  const auto fine = voronoi(40, 6);
  const auto coarse = voronoi(4, 7);
  NestingMap map = nesting_map(*fine, *coarse);
  REQUIRE_FALSE(is_nested(map));
  const DGSpace fs(fine, 1);
  const DGSpace cs(coarse, 1);
  // Drop every overlap of coarse cell 0 and patch coverage by duplicating
  // others would be convoluted; a coarse column of zeros is simplest.
  auto& ov = std::get<NonNestedMap>(map).overlaps;
  std::erase_if(ov, [](const Overlap& o) { return o.coarse == 0; });
  CHECK_THROWS((void)build_prolongation(fs, cs, map));
}

TEST_CASE("coarse operator") {
  const auto np = nested_pair(40, 4, 8);
  const DGSpace fs(np.fine, 1);
  const DiffusionField rho = DiffusionField::constant(np.fine->n_cells(), 1.0);
  const SparseMatrix a = assemble_sipdg(fs, rho);
  SUBCASE("Q = I gives A") {
    SparseMatrix eye(a.rows(), a.cols());
    eye.setIdentity();
    const CoarseSolver c = build_coarse_operator(a, eye);
    CHECK(Eigen::MatrixXd(c.a0 - a).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("symmetric and positive definite") {
    const DGSpace cs(np.coarse, 1);
    const SparseMatrix q = build_prolongation(fs, cs, nesting_map(*np.fine, *np.coarse));
    const CoarseSolver c = build_coarse_operator(a, q);
    const Eigen::MatrixXd a0(c.a0);
    REQUIRE(a0.rows() <= 100);
    CHECK((a0 - a0.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * a0.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a0, Eigen::EigenvaluesOnly);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
    // Without symmetrization the triple product agrees to rounding.
    const Eigen::MatrixXd raw = Eigen::MatrixXd(q).transpose() * Eigen::MatrixXd(a) * Eigen::MatrixXd(q);
    CHECK((raw - a0).cwiseAbs().maxCoeff() < 1e-10 * raw.cwiseAbs().maxCoeff());
  }
  SUBCASE("indefinite operator is rejected") {
    SparseMatrix neg = -a;
    SparseMatrix eye(a.rows(), a.cols());
    eye.setIdentity();
    CHECK_THROWS_AS(build_coarse_operator(neg, eye), SchwarzError);
  }
}

TEST_CASE("local solvers") {
  const auto mesh = voronoi(30, 9);
  const DGSpace fs(mesh, 2);
  const DiffusionField rho = DiffusionField::constant(mesh->n_cells(), 1.0);
  const SparseMatrix a = assemble_sipdg(fs, rho);
  const Eigen::MatrixXd ad(a);
  SUBCASE("single subdomain is A") {
    const Partition one = make_partition(*mesh, std::vector<int>(mesh->n_cells(), 0));
    const auto solvers = build_local_solvers(a, one, fs);
    REQUIRE(solvers.size() == 1);
    const Eigen::MatrixXd l = solvers[0].factor.matrixL();
    CHECK((l * l.transpose() - ad).cwiseAbs().maxCoeff() < 1e-10 * ad.cwiseAbs().maxCoeff());
  }
  SUBCASE("per-element partition gives the diagonal blocks") {
    const auto solvers = build_local_solvers(a, identity_partition(*mesh), fs);
    REQUIRE(static_cast<int>(solvers.size()) == mesh->n_cells());
    for (int k = 0; k < mesh->n_cells(); ++k) {
      const Eigen::MatrixXd l = solvers[k].factor.matrixL();
      const Eigen::MatrixXd block = ad.block(fs.dof_offset(k), fs.dof_offset(k), fs.n_local(), fs.n_local());
      CHECK((l * l.transpose() - block).cwiseAbs().maxCoeff() < 1e-10 * block.cwiseAbs().maxCoeff());
    }
  }
  SUBCASE("agglomerated blocks are SPD") {
    const Partition parts = agglomerate(*mesh, 5, AgglomerationMethod::coordinate_bisection);
    const auto dofs = subdomain_dofs(parts, fs);
    for (const auto& d : dofs) {
      Eigen::MatrixXd block(d.size(), d.size());
      for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) block(i, j) = ad(d[i], d[j]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block, Eigen::EigenvaluesOnly);
      CHECK(eig.eigenvalues().minCoeff() > 0.0);
    }
    CHECK_NOTHROW((void)build_local_solvers(a, parts, fs));
  }
}

TEST_CASE("subdomain dof sets partition the dofs") {
  const auto mesh = voronoi(45, 10);
  const DGSpace fs(mesh, 3);
  const Partition parts = agglomerate(*mesh, 6, AgglomerationMethod::coordinate_bisection);
  const auto dofs = subdomain_dofs(parts, fs);
  std::vector<int> hits(fs.n_dofs(), 0);
  for (const auto& d : dofs)
    for (int i : d) ++hits[i];
  for (int h : hits) CHECK(h == 1);
  // Scatter of gather is the identity.
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  Eigen::VectorXd v(fs.n_dofs());
  for (auto& x : v) x = g(rng);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(v.size());
  for (const auto& d : dofs)
    for (int i : d) sum[i] += v[i];
  CHECK((sum - v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("preconditioner is linear, symmetric and positive definite") {
  const auto np = nested_pair(60, 6, 12);
  const DGSpace fs(np.fine, 2);
  const DGSpace cs(np.coarse, 1);
  std::vector<double> r(np.fine->n_cells());
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> e(0, 4);
  for (auto& x : r) x = std::pow(10.0, e(rng));
  const DiffusionField rho(r);
  const SparseMatrix a = assemble_sipdg(fs, rho);
  const SparseMatrix q = build_prolongation(fs, cs, nesting_map(*np.fine, *np.coarse));
  const Partition sub = agglomerate(*np.fine, 15, AgglomerationMethod::coordinate_bisection);
  const SchwarzPreconditioner pre(a, fs, sub, q);
  const Eigen::Index n = a.rows();
  std::normal_distribution<double> g;
  auto random_vec = [&] {
    Eigen::VectorXd v(n);
    for (auto& x : v) x = g(rng);
    return v;
  };

  const Eigen::VectorXd x = random_vec();
  const Eigen::VectorXd y = random_vec();
  const Eigen::VectorXd lhs = pre.apply(2.5 * x - 0.75 * y);
  const Eigen::VectorXd rhs = 2.5 * pre.apply(x) - 0.75 * pre.apply(y);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));

  for (int t = 0; t < 100; ++t) {
    const Eigen::VectorXd u = random_vec();
    const Eigen::VectorXd v = random_vec();
    const double uv = u.dot(pre.apply(v));
    const double vu = v.dot(pre.apply(u));
    CHECK(std::abs(uv - vu) <= 1e-10 * std::max(std::abs(uv), std::abs(vu)));
    CHECK(u.dot(pre.apply(u)) > 0.0);
  }

  CHECK_THROWS_AS(pre.apply(Eigen::VectorXd::Zero(n + 1)), SchwarzError);
}

TEST_CASE("preconditioner matches the dense definition") {
  const auto np = nested_pair(24, 3, 14);
  const DGSpace fs(np.fine, 1);
  const DGSpace cs(np.coarse, 1);
  const DiffusionField rho = DiffusionField::constant(np.fine->n_cells(), 1.0);
  const SparseMatrix a = assemble_sipdg(fs, rho);
  const SparseMatrix q = build_prolongation(fs, cs, nesting_map(*np.fine, *np.coarse));
  const Partition sub = identity_partition(*np.fine);
  const Eigen::MatrixXd ad(a);
  const Eigen::MatrixXd qd(q);
  const Eigen::Index n = a.rows();

  Eigen::MatrixXd expected = qd * (qd.transpose() * ad * qd).inverse() * qd.transpose();
  for (int k = 0; k < np.fine->n_cells(); ++k) {
    const int o = fs.dof_offset(k);
    const int m = fs.n_local();
    expected.block(o, o, m, m) += ad.block(o, o, m, m).inverse();
  }
  const SchwarzPreconditioner pre(a, fs, sub, q);
  CHECK((dense_apply(pre, n) - expected).cwiseAbs().maxCoeff() < 1e-9 * expected.cwiseAbs().maxCoeff());

  SUBCASE("ablation flags") {
    const SchwarzPreconditioner local_only(a, fs, sub, SparseMatrix(), {false, true});
    const SchwarzPreconditioner coarse_only(a, fs, sub, q, {true, false});
    const Eigen::MatrixXd sum = dense_apply(local_only, n) + dense_apply(coarse_only, n);
    CHECK((sum - expected).cwiseAbs().maxCoeff() < 1e-9 * expected.cwiseAbs().maxCoeff());
    CHECK(local_only.stats().coarse_dim == 0);
    CHECK(coarse_only.stats().n_subdomains == 0);
    CHECK_THROWS_AS(SchwarzPreconditioner(a, fs, sub, q, {false, false}), SchwarzError);
  }
}

TEST_CASE("exactness limit: one subdomain without coarse space") {
  const auto mesh = voronoi(50, 15);
  const DGSpace fs(mesh, 2);
  std::vector<double> r(mesh->n_cells());
  for (int k = 0; k < mesh->n_cells(); ++k) r[k] = k % 2 ? 1e4 : 1.0;
  const SparseMatrix a = assemble_sipdg(fs, DiffusionField(r));
  const Partition one = make_partition(*mesh, std::vector<int>(mesh->n_cells(), 0));
  const SchwarzPreconditioner pre(a, fs, one, SparseMatrix(), {false, true});
  const Eigen::VectorXd b = assemble_rhs(fs, [](const Vec2& x) { return std::sin(3.0 * x.x()) + x.y(); });
  const PCGReport rep = pcg([&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = a * x; }, pre.as_operator(), b);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  CHECK(std::abs(rep.cond_estimate - 1.0) < 1e-8);
}

TEST_CASE("two-level preconditioning beats one-level on a jump problem") {
  const auto np = nested_pair(256, 16, 16);
  const DGSpace fs(np.fine, 1);
  const DGSpace cs(np.coarse, 1);
  std::vector<double> r(np.fine->n_cells());
  for (int k = 0; k < np.fine->n_cells(); ++k) r[k] = np.fine->cell_centroid(k).x() < 0.5 ? 1.0 : 1e3;
  const SparseMatrix a = assemble_sipdg(fs, DiffusionField(r));
  const SparseMatrix q = build_prolongation(fs, cs, nesting_map(*np.fine, *np.coarse));
  const Partition sub = identity_partition(*np.fine);
  const Eigen::VectorXd b = assemble_rhs(fs, [](const Vec2&) { return 1.0; });
  auto apply_a = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = a * x; };
  const PCGReport two = pcg(apply_a, SchwarzPreconditioner(a, fs, sub, q).as_operator(), b);
  const PCGReport one = pcg(apply_a, SchwarzPreconditioner(a, fs, sub, q, {false, true}).as_operator(), b);
  CHECK(two.converged);
  CHECK(two.iterations < one.iterations);
  CHECK(two.cond_estimate < one.cond_estimate);
}

TEST_CASE("setup statistics") {
  const auto np = nested_pair(40, 4, 17);
  const DGSpace fs(np.fine, 1);
  const DGSpace cs(np.coarse, 1);
  const SparseMatrix a = assemble_sipdg(fs, DiffusionField::constant(np.fine->n_cells(), 1.0));
  const SparseMatrix q = build_prolongation(fs, cs, nesting_map(*np.fine, *np.coarse));
  const SchwarzPreconditioner pre(a, fs, np.parts, q);
  const SchwarzStats& s = pre.stats();
  CHECK(s.n_dofs == fs.n_dofs());
  CHECK(s.n_subdomains == 4);
  CHECK(s.coarse_dim == cs.n_dofs());
  CHECK(s.coloring == coloring_bound(*np.fine, np.parts));
  CHECK(s.min_block <= s.max_block);
  const std::string json = s.to_json();
  CHECK(json.find("\"N_S\"") != std::string::npos);
  CHECK(json.find("\"coarse_dim\":12") != std::string::npos);
}

TEST_CASE("theoretical bound") {
  SUBCASE("nested lowest order") {
    BoundInputs in;
    in.h = 0.1;
    in.H = 0.2;
    in.H_sub = 0.1;
    in.n_s = 3;
    CHECK(theoretical_bound(in) == doctest::Approx(24.0).epsilon(1e-14));
  }
  SUBCASE("non-nested") {
    BoundInputs in;
    in.nested = false;
    in.p = 2;
    in.q = 1;
    in.h = 0.05;
    in.H = 0.2;
    in.n_s = 5;
    CHECK(theoretical_bound(in) == doctest::Approx(256.0 * 6.0).epsilon(1e-13));
  }
  SUBCASE("monotone in H, p and the rho ratio") {
    BoundInputs base;
    base.h = 0.01;
    base.H = 0.04;
    base.H_sub = 0.02;
    base.n_s = 4;
    for (bool nested : {true, false}) {
      base.nested = nested;
      double prev = 0.0;
      for (double H = 0.02; H <= 0.5; H *= 1.3) {
        BoundInputs in = base;
        in.H = H;
        const double v = theoretical_bound(in);
        CHECK(v >= prev);
        prev = v;
      }
      prev = 0.0;
      for (int p = 1; p <= 8; ++p) {
        BoundInputs in = base;
        in.p = p;
        const double v = theoretical_bound(in);
        CHECK(v >= prev);
        prev = v;
      }
      prev = 0.0;
      for (double r = 1.0; r <= 1e6; r *= 10.0) {
        BoundInputs in = base;
        in.rho_ratio = r;
        const double v = theoretical_bound(in);
        CHECK(v >= prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("coarse rho ratio") {
  const PolytopicMesh coarse = quad_grid(2);
  const PolytopicMesh fine = refine_cells(coarse, 5, 18, 3);
  const NestingMap nested = nesting_map(fine, coarse);
  const auto& parent = std::get<NestedMap>(nested).parent;
  std::vector<double> r(fine.n_cells(), 1.0);
  // Put a jump inside coarse cell 2 only.
  int seen = 0;
  for (int k = 0; k < fine.n_cells(); ++k) {
    if (parent[k] == 2 && seen++ == 0) r[k] = 50.0;
  }
  const DiffusionField rho(r);
  CHECK(coarse_rho_ratio(nested, rho, 4) == 50.0);
  CHECK(coarse_rho_ratio(nesting_map(fine, coarse, true), rho, 4) == 50.0);
  CHECK(coarse_rho_ratio(nested, DiffusionField::constant(fine.n_cells(), 7.0), 4) == 1.0);
}
