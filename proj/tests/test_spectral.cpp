#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include "sisnet/linalg.hpp"
#include "sisnet/spectral.hpp"
#include "support.hpp"

using namespace sisnet;
using namespace sisnet::testing;
using Catch::Matchers::WithinAbs;

namespace {

Eigen::MatrixXd m2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

// Largest real part over all eigenvalues, from Eigen's general solver.
double eigen_abscissa(const Eigen::MatrixXd& x) {
  return Eigen::EigenSolver<Eigen::MatrixXd>(x, false).eigenvalues().real().maxCoeff();
}

}  // namespace

TEST_CASE("spectral radius examples", "[spectral]") {
  CHECK_THAT(spectral_radius_nonneg(m2(0, 1, 1, 0)), WithinAbs(1.0, 1e-12));
  CHECK_THAT(spectral_radius_nonneg(m2(0, 2, 2, 0)), WithinAbs(2.0, 1e-12));
  CHECK(spectral_radius_nonneg(Eigen::MatrixXd::Zero(3, 3)) == 0.0);
  Eigen::MatrixXd dag = Eigen::MatrixXd::Zero(3, 3);
  dag(0, 1) = dag(1, 2) = 1.0;
  CHECK(spectral_radius_nonneg(dag) == 0.0);
}

TEST_CASE("basic reproduction number examples", "[spectral]") {
  CHECK_THAT(basic_reproduction_number(two_node(1.0)), WithinAbs(1.0, 1e-12));
  CHECK_THAT(basic_reproduction_number(two_node(0.5)), WithinAbs(2.0, 1e-12));
  CHECK(basic_reproduction_number(EpidemicNetwork::uniform(Digraph(1, {}), 1, 1)) == 0.0);
  CHECK(basic_reproduction_number(chain(4)) == 0.0);

  const auto net = three_node();
  const auto d = scc_decompose(net.graph());
  const auto r = component_reproduction_numbers(net, d);
  REQUIRE(r.size() == 2);
  CHECK_THAT(r[0], WithinAbs(2.0, 1e-12));
  CHECK(r[1] == 0.0);
}

TEST_CASE("threshold classification band", "[spectral]") {
  CHECK(classify_threshold(1.0) == Threshold::Critical);
  CHECK(classify_threshold(1.0 + 5e-10) == Threshold::Critical);
  CHECK(classify_threshold(1.0 + 2e-9) == Threshold::Supercritical);
  CHECK(classify_threshold(0.5) == Threshold::Subcritical);
}

TEST_CASE("Metzler abscissa examples", "[spectral]") {
  CHECK_THAT(metzler_abscissa(two_node(0.5).linearization_at_origin()), WithinAbs(0.5, 1e-12));
  CHECK_THAT(metzler_abscissa(two_node(1.0).linearization_at_origin()), WithinAbs(0.0, 1e-12));
  CHECK_THAT(metzler_abscissa(m2(-1, 0, 0, -2)), WithinAbs(-1.0, 1e-12));
  CHECK_THROWS_AS(metzler_abscissa(m2(-1, -1, 0, -2)), std::invalid_argument);

  const auto rep = metzler_abscissa_report(m2(-1, 3, 0, -2));
  CHECK(rep.reducible);
  CHECK(rep.blocks == 2);
  CHECK_THAT(rep.value, WithinAbs(-1.0, 1e-12));
}

TEST_CASE("Perron-Frobenius eigenpair examples", "[spectral]") {
  auto pf = pf_eigenpair(m2(0, 1, 1, 0));
  CHECK_THAT(pf.value, WithinAbs(1.0, 1e-12));
  CHECK(inf_dist(pf.right, Eigen::Vector2d(1, 1)) < 1e-12);
  CHECK(inf_dist(pf.left, Eigen::Vector2d(1, 1)) < 1e-12);

  pf = pf_eigenpair(m2(-0.5, 0.5, 0.5, -0.5));
  CHECK_THAT(pf.value, WithinAbs(0.0, 1e-12));
  CHECK(inf_dist(pf.right, Eigen::Vector2d(1, 1)) < 1e-12);

  pf = pf_eigenpair(m2(0, 2, 1, 0));
  CHECK_THAT(pf.value, WithinAbs(std::sqrt(2.0), 1e-12));
  CHECK_THAT(pf.right[1] / pf.right[0], WithinAbs(1.0 / std::sqrt(2.0), 1e-10));
  // left vector: xi^T X = rho xi^T  =>  xi ∝ (1, sqrt 2)
  CHECK_THAT(pf.left[0] / pf.left[1], WithinAbs(1.0 / std::sqrt(2.0), 1e-10));

  CHECK_THROWS_AS(pf_eigenpair(m2(0, 1, 0, 0)), ReducibleMatrixError);
}

TEST_CASE("PF residuals, positivity and agreement with a dense eigensolver",
          "[spectral][property]") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(10);
    Eigen::MatrixXd x = random_irreducible(rng, n);
    for (std::size_t i = 0; i < n; ++i) x(i, i) = rng.uniform(-3.0, 1.0);
    const auto pf = pf_eigenpair(x);
    const double scale = std::max(1.0, x.cwiseAbs().rowwise().sum().maxCoeff());
    REQUIRE((x * pf.right - pf.value * pf.right).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    REQUIRE((x.transpose() * pf.left - pf.value * pf.left).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    REQUIRE(pf.right.minCoeff() >= 1e-12);
    REQUIRE(pf.left.minCoeff() >= 1e-12);
    REQUIRE_THAT(pf.right.maxCoeff(), WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(pf.value, WithinAbs(eigen_abscissa(x), 1e-8 * scale));
  }
}

TEST_CASE("reducible abscissa matches a dense eigensolver", "[spectral][property]") {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(10);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        x(i, j) = (i == j) ? rng.uniform(-2.0, 0.5) : (rng.uniform() < 0.2 ? rng.uniform() : 0.0);
    REQUIRE_THAT(metzler_abscissa(x), WithinAbs(eigen_abscissa(x), 1e-8));
  }
}

TEST_CASE("shift invariance of the abscissa", "[spectral][property]") {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(8);
    Eigen::MatrixXd x = random_irreducible(rng, n);
    x.diagonal().array() -= rng.uniform(0.0, 2.0);
    const double c = rng.uniform(-5.0, 5.0);
    const Eigen::MatrixXd shifted = x + c * Eigen::MatrixXd::Identity(n, n);
    REQUIRE_THAT(metzler_abscissa(shifted), WithinAbs(metzler_abscissa(x) + c, 1e-9));
  }
}

TEST_CASE("threshold equivalence R0 vs abscissa", "[spectral][property]") {
  Rng rng(2024);
  auto sign = [](double v) { return v > 1e-9 ? 1 : (v < -1e-9 ? -1 : 0); };
  for (int trial = 0; trial < 1000; ++trial) {
    auto net = random_strongly_connected(rng, 2 + rng.index(9), 0.3);
    // a quarter of the nets are placed exactly at the threshold
    const double target = trial % 4 == 0 ? 1.0 : rng.uniform(0.3, 3.0);
    net = scale_to_r0(net, target);
    const double r0 = basic_reproduction_number(net);
    const double mu = metzler_abscissa(net.linearization_at_origin());
    REQUIRE(sign(r0 - 1.0) == sign(mu));
  }
}

TEST_CASE("Jacobi symmetric eigenvalues agree with Eigen", "[linalg][property]") {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(12);
    Eigen::MatrixXd a(n, n);
    for (auto& v : a.reshaped()) v = rng.uniform(-2.0, 2.0);
    const Eigen::MatrixXd m = a + a.transpose();
    const Eigen::VectorXd ours = symmetric_eigenvalues(m);
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
    REQUIRE(inf_dist(ours, ref) < 1e-10);
  }
  CHECK_THROWS(symmetric_eigenvalues(m2(0, 1, 2, 0)));
}

TEST_CASE("Gaussian elimination", "[linalg]") {
  const Eigen::VectorXd x = solve_linear(m2(0, 2, 1, 1), Eigen::Vector2d(4, 3));
  CHECK(inf_dist(x, Eigen::Vector2d(1, 2)) < 1e-14);
  CHECK_THROWS_AS(solve_linear(m2(1, 2, 2, 4), Eigen::Vector2d(1, 1)), SingularMatrixError);
}

TEST_CASE("matrix hash", "[linalg]") {
  const auto a = m2(0, 1, 1, 0);
  CHECK(matrix_hash(a) == matrix_hash(m2(-0.0, 1, 1, 0)));
  CHECK(matrix_hash(a) != matrix_hash(m2(0, 1, 1, 1e-300)));
  CHECK(matrix_hash(a).size() == 16);
}
