#include "dgschwarz/krylov.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace dgschwarz;

namespace {

LinearOperator dense_operator(const Eigen::MatrixXd& a) {
  return [a](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = a * x; };
}

Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng, double spread) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) q(i, j) = g(rng);
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
  const Eigen::MatrixXd u = qr.householderQ();
  Eigen::VectorXd ev(n);
  for (int i = 0; i < n; ++i) ev[i] = std::pow(spread, static_cast<double>(i) / (n - 1));
  return u * ev.asDiagonal() * u.transpose();
}

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

}  // namespace

TEST_CASE("pcg examples") {
  std::mt19937_64 rng(1);
  SUBCASE("identity") {
    const Eigen::VectorXd b = random_vector(10, rng);
    const PCGReport r = pcg(identity_operator(), identity_operator(), b);
    CHECK(r.iterations == 1);
    CHECK(r.converged);
    CHECK((r.solution - b).norm() < 1e-14 * b.norm());
    CHECK(r.cond_estimate == doctest::Approx(1.0));
    CHECK(r.residual_history.size() == 2);
  }
  SUBCASE("diag(1, 2)") {
    const Eigen::MatrixXd a = Eigen::Vector2d(1, 2).asDiagonal();
    const PCGReport r = pcg(dense_operator(a), identity_operator(), Eigen::Vector2d(1, 1));
    CHECK(r.iterations <= 2);
    CHECK(r.converged);
  }
  SUBCASE("random SPD vs dense solve") {
    const Eigen::MatrixXd a = random_spd(50, rng, 1e3);
    const Eigen::VectorXd b = random_vector(50, rng);
    const PCGReport r = pcg(dense_operator(a), identity_operator(), b, {1e-12, 0});
    const Eigen::VectorXd x = a.llt().solve(b);
    CHECK((r.solution - x).norm() <= 1e-8 * x.norm());
    CHECK(r.residual_history.back() <= 1e-12);
  }
  SUBCASE("zero right-hand side") {
    const PCGReport r = pcg(identity_operator(), identity_operator(), Eigen::VectorXd::Zero(5));
    CHECK(r.iterations == 0);
    CHECK(r.solution.isZero(0.0));
    CHECK(r.converged);
  }
  SUBCASE("maxit is reported") {
    const Eigen::MatrixXd a = random_spd(40, rng, 1e4);
    const PCGReport r = pcg(dense_operator(a), identity_operator(), random_vector(40, rng), {1e-12, 3});
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 3);
    CHECK(r.residual_history.size() == 4);
  }
  SUBCASE("indefinite operator throws") {
    const Eigen::MatrixXd a = Eigen::Vector3d(1, -2, 3).asDiagonal();
    CHECK_THROWS_AS(pcg(dense_operator(a), identity_operator(), Eigen::Vector3d(1, 1, 1)), KrylovError);
  }
  SUBCASE("non-finite data throws") {
    Eigen::VectorXd b = Eigen::VectorXd::Ones(3);
    b[1] = std::nan("");
    CHECK_THROWS_AS(pcg(identity_operator(), identity_operator(), b), KrylovError);
  }
}

TEST_CASE("default maxit") { CHECK(default_maxit(100) == 400); }

TEST_CASE("Lanczos estimate for diag(1, 4)") {
  const Eigen::MatrixXd a = Eigen::Vector2d(1, 4).asDiagonal();
  const PCGReport r = pcg(dense_operator(a), identity_operator(), Eigen::Vector2d(0.3, 0.7), {1e-14, 0});
  REQUIRE(r.alphas.size() == 2);
  // Independent oracle: the 2x2 tridiagonal through a dense eigensolver.
  Eigen::Matrix2d t;
  t(0, 0) = 1.0 / r.alphas[0];
  t(1, 1) = 1.0 / r.alphas[1] + r.betas[0] / r.alphas[0];
  t(0, 1) = t(1, 0) = std::sqrt(r.betas[0]) / r.alphas[0];
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(t);
  CHECK(std::abs(eig.eigenvalues()[0] - 1.0) < 1e-10);
  CHECK(std::abs(eig.eigenvalues()[1] - 4.0) < 1e-10);
  CHECK(std::abs(r.lambda_min - 1.0) < 1e-10);
  CHECK(std::abs(r.lambda_max - 4.0) < 1e-10);
  CHECK(std::abs(r.cond_estimate - 4.0) < 1e-10);
}

TEST_CASE("Sturm bisection matches a dense tridiagonal eigensolve") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial * 3;
    std::vector<double> d(n);
    std::vector<double> e(n > 1 ? n - 1 : 0);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) t(i, i) = d[i] = u(rng);
    for (int i = 0; i + 1 < n; ++i) t(i, i + 1) = t(i + 1, i) = e[i] = (trial % 5 == 0 ? 1e-9 : 1.0) * u(rng);
    const auto [lo, hi] = tridiagonal_extreme_eigenvalues(d, e);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    const double scale = t.cwiseAbs().maxCoeff();
    CHECK(std::abs(lo - eig.eigenvalues()[0]) < 1e-13 * scale);
    CHECK(std::abs(hi - eig.eigenvalues()[n - 1]) < 1e-13 * scale);
  }
}

TEST_CASE("Lanczos estimate vs dense generalized eigenvalues") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 20 + 18 * trial;
    const Eigen::MatrixXd a = random_spd(n, rng, std::pow(10.0, 1 + trial % 4));
    // Jacobi-like SPD preconditioner with a random positive diagonal.
    Eigen::VectorXd dvec = random_vector(n, rng).cwiseAbs().array() + 0.5;
    const Eigen::MatrixXd minv = dvec.asDiagonal();
    const PCGReport r = pcg(dense_operator(a), dense_operator(minv), random_vector(n, rng), {1e-14, 4 * n});
    const SpectrumEstimate exact = dense_condition(a, Eigen::MatrixXd(dvec.cwiseInverse().asDiagonal()));
    CHECK(std::abs(r.cond_estimate - exact.condition) <= 0.05 * exact.condition);
    CHECK(r.cond_estimate >= 1.0);
  }
}

TEST_CASE("exact preconditioner gives one iteration and K = 1") {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd a = random_spd(30, rng, 1e5);
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  const LinearOperator minv = [&llt](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = llt.solve(x); };
  const PCGReport r = pcg(dense_operator(a), minv, random_vector(30, rng));
  CHECK(r.iterations == 1);
  CHECK(std::abs(r.cond_estimate - 1.0) < 1e-8);
}

TEST_CASE("energy error is monotone") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd a = random_spd(60, rng, 1e4);
  const Eigen::VectorXd b = random_vector(60, rng);
  const Eigen::VectorXd x = a.llt().solve(b);
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 60; ++k) {
    const PCGReport r = pcg(dense_operator(a), identity_operator(), b, {1e-30, k});
    const Eigen::VectorXd e = r.solution - x;
    const double err = std::sqrt(e.dot(a * e));
    CHECK(err <= previous * (1 + 1e-10) + 1e-14);
    previous = err;
    if (r.converged) break;
  }
}

TEST_CASE("Ritz values interlace") {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd a = random_spd(80, rng, 1e3);
  const Eigen::VectorXd b = random_vector(80, rng);
  const PCGReport full = pcg(dense_operator(a), identity_operator(), b, {1e-30, 40});
  for (std::size_t k = 1; k < full.alphas.size(); ++k) {
    const std::vector<double> ak(full.alphas.begin(), full.alphas.begin() + k);
    const std::vector<double> ak1(full.alphas.begin(), full.alphas.begin() + k + 1);
    const SpectrumEstimate ek = lanczos_condition_estimate(ak, full.betas);
    const SpectrumEstimate ek1 = lanczos_condition_estimate(ak1, full.betas);
    CHECK(ek1.lambda_min <= ek.lambda_min * (1 + 1e-12));
    CHECK(ek1.lambda_max >= ek.lambda_max * (1 - 1e-12));
  }
}

TEST_CASE("lanczos_condition_estimate errors") {
  CHECK_THROWS_AS(lanczos_condition_estimate({}, {}), KrylovError);
  CHECK_THROWS_AS(lanczos_condition_estimate({1.0, -1.0}, {0.5}), KrylovError);
}

TEST_CASE("dense_condition examples") {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd a = random_spd(12, rng, 50.0);
  CHECK(dense_condition(a, a).condition == doctest::Approx(1.0).epsilon(1e-10));
  Eigen::VectorXd d(5);
  d << 1, 2, 3, 4, 5;
  CHECK(dense_condition(d.asDiagonal().toDenseMatrix(), Eigen::MatrixXd::Identity(5, 5)).condition == doctest::Approx(5.0));
  CHECK_THROWS_AS(dense_condition(Eigen::Vector2d(1, -1).asDiagonal().toDenseMatrix(), Eigen::MatrixXd::Identity(2, 2)),
                  KrylovError);
}

TEST_CASE("residual csv") {
  const PCGReport r = pcg(identity_operator(), identity_operator(), Eigen::VectorXd::Ones(4));
  const auto path = std::filesystem::temp_directory_path() / "dgschwarz_res.csv";
  write_residual_csv(r, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "iter,relres");
  std::getline(in, line);
  CHECK(line == "0,1");
  std::filesystem::remove(path);
}
