// Shared fixtures and independent oracles for the test suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "sisnet/generate.hpp"
#include "sisnet/graph.hpp"
#include "sisnet/model.hpp"

namespace sisnet::testing {

inline EpidemicNetwork two_node(double delta, double beta = 1.0) {
  return EpidemicNetwork::uniform(Digraph(2, {{0, 1, 1.0}, {1, 0, 1.0}}), beta, delta);
}

inline EpidemicNetwork chain(std::size_t n, double delta = 1.0) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
  return EpidemicNetwork::uniform(Digraph(n, e), 1.0, delta);
}

// 2-node cycle {0,1} (delta 0.5, R0 = 2) feeding node 2 (delta 0.5) via 1 -> 2.
inline EpidemicNetwork three_node() {
  return EpidemicNetwork::uniform(Digraph(3, {{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}}), 1.0, 0.5);
}

inline Digraph random_digraph(Rng& rng, std::size_t n, double p) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j && rng.uniform() < p) e.push_back({i, j, rng.uniform(0.5, 2.0)});
  return Digraph(n, e);
}

// Transitive closure by Floyd-Warshall; reach(i, j) = path i ->* j (reflexive).
inline std::vector<std::vector<bool>> brute_reach(const Digraph& g) {
  const auto n = g.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (NodeId i = 0; i < n; ++i) r[i][i] = true;
  for (const auto& e : g.edges()) r[e.src][e.dst] = true;
  for (NodeId k = 0; k < n; ++k)
    for (NodeId i = 0; i < n; ++i)
      if (r[i][k])
        for (NodeId j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

// Dense evaluation of (A^T B - D) p - P A^T B p, independent of the sparse
// in-edge loop in the library.
inline Eigen::VectorXd dense_field(const EpidemicNetwork& net, const Eigen::VectorXd& p) {
  const Eigen::MatrixXd a = net.graph().adjacency();
  const Eigen::VectorXd beta = Eigen::Map<const Eigen::VectorXd>(net.beta().data(), net.size());
  const Eigen::VectorXd delta = Eigen::Map<const Eigen::VectorXd>(net.delta().data(), net.size());
  const Eigen::MatrixXd atb = a.transpose() * beta.asDiagonal();
  return atb * p - delta.cwiseProduct(p) - p.cwiseProduct(atb * p);
}

// Damped explicit Euler descent on the residual: p <- clamp(p + h Phi(p))
// from the all-ones vector, with h below the inverse of the largest
// diagonal-plus-row bound so the map stays monotone. Stops when the dense
// residual drops below tol.
inline Eigen::VectorXd euler_oracle(const EpidemicNetwork& net, double tol = 1e-13,
                                    std::size_t max_iter = 50'000'000) {
  const Eigen::MatrixXd a = net.graph().adjacency();
  double bound = 0.0;
  for (NodeId i = 0; i < net.size(); ++i) {
    double in = 0.0;
    for (NodeId j = 0; j < net.size(); ++j) in += a(j, i) * net.beta()[j];
    bound = std::max(bound, net.delta()[i] + in);
  }
  const double h = 0.5 / bound;
  Eigen::VectorXd p = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(net.size()));
  for (std::size_t k = 0; k < max_iter; ++k) {
    const Eigen::VectorXd f = dense_field(net, p);
    if (f.cwiseAbs().maxCoeff() < tol) break;
    p = (p + h * f).cwiseMax(0.0).cwiseMin(1.0);
  }
  return p;
}

// Random irreducible nonnegative matrix (ring support plus extra entries).
inline Eigen::MatrixXd random_irreducible(Rng& rng, std::size_t n, double p = 0.3) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) x(i, (i + 1) % n) = rng.uniform(0.2, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && x(i, j) == 0.0 && rng.uniform() < p) x(i, j) = rng.uniform(0.1, 1.0);
  if (n == 1) x(0, 0) = rng.uniform(0.2, 1.0);
  return x;
}

inline double inf_dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace sisnet::testing
