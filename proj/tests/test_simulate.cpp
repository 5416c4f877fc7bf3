#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "sisnet/equilibrium.hpp"
#include "sisnet/simulate.hpp"
#include "support.hpp"

using namespace sisnet;
using namespace sisnet::testing;
using Catch::Matchers::WithinAbs;

TEST_CASE("integrate examples", "[simulate]") {
  SECTION("zero start stays at zero") {
    const auto traj = integrate(two_node(0.5), Eigen::Vector2d::Zero());
    for (const auto& p : traj.states) REQUIRE(p.isZero());
  }
  SECTION("single node decays exponentially") {
    const auto net = EpidemicNetwork::uniform(Digraph(1, {}), 1.0, 1.0);
    IntegrationOptions o;
    o.t_end = 1.0;
    o.step = 1e-3;
    const auto traj = integrate(net, Eigen::VectorXd::Ones(1), o);
    CHECK_THAT(traj.times.back(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(traj.states.back()[0], WithinAbs(std::exp(-1.0), 1e-6));
  }
  SECTION("2-node example converges to 0.5") {
    IntegrationOptions o;
    o.t_end = 60.0;
    const auto traj = integrate(two_node(0.5), Eigen::Vector2d(0.9, 0.1), o);
    CHECK(inf_dist(traj.states.back(), Eigen::Vector2d(0.5, 0.5)) < 1e-6);
  }
  SECTION("recording schedule") {
    IntegrationOptions o;
    o.t_end = 1.0;
    o.step = 0.1;
    o.record_every = 3;
    const auto traj = integrate(two_node(0.5), Eigen::Vector2d(0.2, 0.3), o);
    // t = 0, 0.3, 0.6, 0.9 and the final 1.0
    REQUIRE(traj.times.size() == 5);
    CHECK_THAT(traj.times.back(), WithinAbs(1.0, 1e-12));
    for (std::size_t k = 1; k < traj.times.size(); ++k) CHECK(traj.times[k] > traj.times[k - 1]);
  }
  SECTION("invalid input") {
    CHECK_THROWS(integrate(two_node(0.5), Eigen::Vector2d(1.2, 0.0)));
    IntegrationOptions o;
    o.step = 0.0;
    CHECK_THROWS(integrate(two_node(0.5), Eigen::Vector2d(0.2, 0.0), o));
  }
  SECTION("early stop on the residual") {
    IntegrationOptions o;
    o.t_end = 1e4;
    o.stop_tol = 1e-9;
    const auto traj = integrate(two_node(0.5), Eigen::Vector2d(0.9, 0.1), o);
    CHECK(traj.converged);
    CHECK(traj.times.back() < 200.0);
  }
}

TEST_CASE("converge examples", "[simulate]") {
  Rng rng(51);
  SECTION("subcritical net goes to 0") {
    const auto net = scale_to_r0(random_strongly_connected(rng, 6, 0.3), 0.5);
    Eigen::VectorXd p0(6);
    for (auto& v : p0) v = rng.uniform();
    const auto r = converge(net, p0);
    CHECK(r.converged);
    CHECK(r.limit.maxCoeff() < 1e-6);
  }
  SECTION("supercritical 2-node example") {
    const auto r = converge(two_node(0.5), Eigen::Vector2d(0.1, 0.7));
    CHECK(r.converged);
    CHECK(inf_dist(r.limit, Eigen::Vector2d(0.5, 0.5)) < 1e-6);
  }
  SECTION("chain DAG") {
    const auto r = converge(chain(4), Eigen::Vector4d(1, 1, 1, 1));
    CHECK(r.converged);
    CHECK(r.limit.maxCoeff() < 1e-6);
  }
  SECTION("t_max exceeded is flagged") {
    ConvergeOptions o;
    o.t_max = 0.5;
    const auto r = converge(two_node(0.5), Eigen::Vector2d(0.1, 0.7), o);
    CHECK_FALSE(r.converged);
    CHECK(r.time >= 0.5 - 1e-12);
  }
}

TEST_CASE("lyapunov_trace", "[simulate]") {
  const auto net = two_node(0.5);
  const Eigen::Vector2d p_star(0.5, 0.5);
  auto traj = integrate(net, p_star);
  for (double v : lyapunov_trace(traj, p_star)) CHECK(v < 1e-24);

  traj = integrate(net, Eigen::Vector2d(0.95, 0.05));
  const auto v = lyapunov_trace(traj, p_star);
  for (std::size_t k = 1; k < v.size(); ++k) REQUIRE(v[k] <= v[k - 1] + 1e-9);
  CHECK_THROWS(lyapunov_trace(traj, Eigen::Vector3d::Zero()));
  CHECK_THROWS(lyapunov_trace(traj, p_star, Eigen::VectorXd::Ones(3)));
}

TEST_CASE("trajectory CSV format", "[simulate]") {
  IntegrationOptions o;
  o.t_end = 0.02;
  auto traj = integrate(two_node(0.5), Eigen::Vector2d(0.1, 0.2), o);
  traj.lyapunov = lyapunov_trace(traj, Eigen::Vector2d(0.5, 0.5));
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,p_0,p_1,V");
  std::getline(is, line);
  CHECK(line.rfind("0,0.10000000000000001,0.20000000000000001,", 0) == 0);
  std::size_t rows = 1;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("step halving changes the end state by at most 1e-8", "[simulate][property]") {
  IntegrationOptions o;
  o.t_end = 20.0;
  const auto coarse = integrate(two_node(0.5), Eigen::Vector2d(0.9, 0.1), o);
  o.step /= 2;
  const auto fine = integrate(two_node(0.5), Eigen::Vector2d(0.9, 0.1), o);
  CHECK(inf_dist(coarse.states.back(), fine.states.back()) <= 1e-8);
}

TEST_CASE("forward invariance and clamping", "[simulate][property]") {
  Rng rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    const auto net = scale_to_r0(random_strongly_connected(rng, 2 + rng.index(9), 0.3),
                                 rng.uniform(0.3, 4.0));
    Eigen::VectorXd p0(net.size());
    for (auto& v : p0) v = rng.uniform() < 0.3 ? (rng.uniform() < 0.5 ? 0.0 : 1.0) : rng.uniform();
    IntegrationOptions o;
    o.t_end = 20.0;
    const auto traj = integrate(net, p0, o);
    REQUIRE(traj.clamp_total <= 1e-6);
    for (const auto& p : traj.states) {
      REQUIRE(p.minCoeff() >= -1e-9);
      REQUIRE(p.maxCoeff() <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("cascade limits do not depend on upstream initial conditions",
          "[simulate][property]") {
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    GenerateConfig cfg;
    cfg.family = "two-scc";
    cfg.nodes = 4 + rng.index(6);
    cfg.seed = 100 + trial;
    cfg.r0 = rng.uniform(1.3, 2.5);
    cfg.r0_down = rng.uniform(0.3, 2.5);
    const auto net = generate(cfg);
    const auto d = scc_decompose(net.graph());
    const std::size_t up = d.order.front(), down = d.order.back();
    const auto& down_nodes = d.components[down];
    Eigen::VectorXd a(net.size()), b(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
      a[i] = rng.uniform(0.05, 1.0);
      b[i] = a[i];
    }
    for (NodeId v : d.components[up]) b[v] = rng.uniform(0.05, 1.0);
    const auto la = converge(net, a), lb = converge(net, b);
    REQUIRE(la.converged);
    REQUIRE(lb.converged);
    for (NodeId v : down_nodes) REQUIRE_THAT(la.limit[v], WithinAbs(lb.limit[v], 1e-6));
    const auto eq = equilibrium_cascade(net, d);
    REQUIRE(inf_dist(la.limit, eq.p_star) <= 1e-6);
  }
}
