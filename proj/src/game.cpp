#include "sisnet/game.hpp"

#include <algorithm>
#include <cmath>

namespace sisnet {

double objective(const EpidemicNetwork& net, NodeId i, const State& p) {
  if (i >= net.size()) throw std::out_of_range("objective: node out of range");
  check_state(p, net.size());
  double xi = 0.0;
  for (const auto& nb : net.graph().in_neighbors(i))
    xi += nb.weight * net.beta()[nb.node] * p[nb.node];
  const double pi = p[i];
  return -0.5 * net.delta()[i] * pi * pi + pi * (1.0 - 0.5 * pi) * xi;
}

State best_response_gradient(const EpidemicNetwork& net, const State& p) {
  const State xi = infection_pressure(net, p);
  const auto& delta = net.delta();
  State g(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) g[i] = -delta[i] * p[i] + (1.0 - p[i]) * xi[i];
  return g;
}

Eigen::VectorXd concavity_check(const EpidemicNetwork& net, const State& p) {
  const State xi = infection_pressure(net, p);
  Eigen::VectorXd h(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) h[i] = -net.delta()[i] - xi[i];
  return h;
}

DistributedVerdict distributed_condition(const EpidemicNetwork& net) {
  const auto& g = net.graph();
  const auto& beta = net.beta();
  DistributedVerdict v;
  v.pass = v.in_pass = true;
  v.nodes.resize(net.size());
  for (NodeId i = 0; i < net.size(); ++i) {
    double out_sum = 0.0, in_sum = 0.0;
    for (const auto& nb : g.out_neighbors(i)) out_sum += nb.weight * beta[nb.node];
    for (const auto& nb : g.in_neighbors(i)) in_sum += nb.weight * beta[nb.node];
    auto& row = v.nodes[i];
    row.margin = net.delta()[i] - 0.5 * out_sum;
    row.in_margin = net.delta()[i] - 0.5 * in_sum;
    row.pass = row.margin > 0.0;
    row.in_pass = row.in_margin > 0.0;
    v.pass = v.pass && row.pass;
    v.in_pass = v.in_pass && row.in_pass;
  }
  return v;
}

DominanceVerdict diagonal_dominance_check(const EpidemicNetwork& net) {
  const auto& g = net.graph();
  const auto& beta = net.beta();
  DominanceVerdict v;
  v.pass = true;
  v.nodes.resize(net.size());
  for (NodeId i = 0; i < net.size(); ++i) {
    auto& row = v.nodes[i];
    // U_i(p_i) = -(delta_i / 2) p_i^2 has constant curvature -delta_i.
    row.lhs = 2.0 * std::abs(-net.delta()[i]);
    for (const auto& nb : g.out_neighbors(i)) {
      double worst = 0.0;
      for (const double vertex : {0.0, 1.0})
        worst = std::max(worst, std::abs((1.0 - vertex) * nb.weight * beta[nb.node]));
      row.rhs += worst;
    }
    row.pass = row.lhs > row.rhs;
    v.pass = v.pass && row.pass;
  }
  return v;
}

}  // namespace sisnet
