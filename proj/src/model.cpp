#include "sisnet/model.hpp"

#include <cmath>
#include <string>

namespace sisnet {

EpidemicNetwork::EpidemicNetwork(Digraph graph, std::vector<double> beta,
                                 std::vector<double> delta)
    : graph_(std::move(graph)), beta_(std::move(beta)), delta_(std::move(delta)) {
  const auto n = graph_.size();
  if (beta_.size() != n || delta_.size() != n)
    throw ModelError("rate vectors must have one entry per node (n = " +
                     std::to_string(n) + ")");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(beta_[i]) || beta_[i] <= 0.0)
      throw ModelError("infection rate beta_" + std::to_string(i) + " must be > 0");
    if (!std::isfinite(delta_[i]) || delta_[i] <= 0.0)
      throw ModelError("curing rate delta_" + std::to_string(i) + " must be > 0");
  }
}

EpidemicNetwork EpidemicNetwork::uniform(Digraph graph, double beta, double delta) {
  const auto n = graph.size();
  return EpidemicNetwork(std::move(graph), std::vector<double>(n, beta),
                         std::vector<double>(n, delta));
}

Eigen::MatrixXd EpidemicNetwork::transmission_matrix() const {
  const auto n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : graph_.edges()) m(e.dst, e.src) = e.weight * beta_[e.src];
  return m;
}

Eigen::MatrixXd EpidemicNetwork::curing_matrix() const {
  return Eigen::Map<const Eigen::VectorXd>(delta_.data(), delta_.size()).asDiagonal();
}

Eigen::MatrixXd EpidemicNetwork::linearization_at_origin() const {
  return transmission_matrix() - curing_matrix();
}

void check_state(const State& p, std::size_t n, double slack) {
  if (static_cast<std::size_t>(p.size()) != n)
    throw ModelError("state has length " + std::to_string(p.size()) +
                     ", expected " + std::to_string(n));
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < -slack || p[i] > 1.0 + slack)
      throw ModelError("state entry " + std::to_string(i) + " = " +
                       std::to_string(p[i]) + " is outside [0, 1]");
  }
}

State infection_pressure(const EpidemicNetwork& net, const State& p) {
  const auto n = net.size();
  if (static_cast<std::size_t>(p.size()) != n)
    throw ModelError("state dimension mismatch");
  const auto& g = net.graph();
  const auto& beta = net.beta();
  State xi(n);
  for (NodeId i = 0; i < n; ++i) {
    double s = 0.0;
    for (const auto& nb : g.in_neighbors(i)) s += nb.weight * beta[nb.node] * p[nb.node];
    xi[i] = s;
  }
  return xi;
}

State vector_field(const EpidemicNetwork& net, const State& p) {
  const State xi = infection_pressure(net, p);
  const auto& delta = net.delta();
  State out(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i)
    out[i] = -delta[i] * p[i] + (1.0 - p[i]) * xi[i];
  return out;
}

double steady_state_residual(const EpidemicNetwork& net, const State& p) {
  return vector_field(net, p).lpNorm<Eigen::Infinity>();
}

SubsystemView::SubsystemView(const EpidemicNetwork& net, const SccDecomposition& d,
                             std::size_t component)
    : component_(component) {
  if (component >= d.count())
    throw std::out_of_range("component index " + std::to_string(component) +
                            " out of range (" + std::to_string(d.count()) + ")");
  nodes_ = d.components[component];
  const auto m = nodes_.size();
  std::vector<std::size_t> local(net.size(), m);
  for (std::size_t k = 0; k < m; ++k) local[nodes_[k]] = k;

  transmission_ = Eigen::MatrixXd::Zero(m, m);
  delta_.resize(m);
  const auto& g = net.graph();
  for (std::size_t k = 0; k < m; ++k) {
    const NodeId i = nodes_[k];
    delta_[k] = net.delta()[i];
    for (const auto& nb : g.in_neighbors(i)) {
      const double rate = nb.weight * net.beta()[nb.node];
      if (local[nb.node] < m)
        transmission_(k, local[nb.node]) = rate;
      else
        cross_.push_back({k, nb.node, rate});
    }
  }
}

Eigen::MatrixXd SubsystemView::linearization_at_origin() const {
  Eigen::MatrixXd x = transmission_;
  x.diagonal() -= delta_;
  return x;
}

State SubsystemView::restrict(const State& p) const {
  State q(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) q[k] = p[nodes_[k]];
  return q;
}

Eigen::VectorXd SubsystemView::coupling(const State& p) const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nodes_.size());
  for (const auto& e : cross_) c[e.local_dst] += e.rate * p[e.src];
  return c;
}

Eigen::VectorXd SubsystemView::field(const Eigen::VectorXd& q,
                                     const Eigen::VectorXd& c) const {
  const Eigen::VectorXd inner = transmission_ * q;
  Eigen::VectorXd out(q.size());
  for (Eigen::Index k = 0; k < q.size(); ++k)
    out[k] = -delta_[k] * q[k] + (1.0 - q[k]) * (inner[k] + c[k]);
  return out;
}

SubsystemView subsystem(const EpidemicNetwork& net, const SccDecomposition& d,
                        std::size_t component) {
  return SubsystemView(net, d, component);
}

}  // namespace sisnet
