#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "sisnet/graph.hpp"

namespace sisnet {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Infection probabilities, one entry per node.
using State = Eigen::VectorXd;

/// Default slack for "inside [0, 1]" checks on numerically produced states.
inline constexpr double kStateSlack = 1e-9;

/// Mean-field SIS network: digraph plus per-node infection rates beta and
/// curing rates delta, both strictly positive.
class EpidemicNetwork {
 public:
  EpidemicNetwork(Digraph graph, std::vector<double> beta, std::vector<double> delta);

  static EpidemicNetwork uniform(Digraph graph, double beta, double delta);

  const Digraph& graph() const { return graph_; }
  std::size_t size() const { return graph_.size(); }
  const std::vector<double>& beta() const { return beta_; }
  const std::vector<double>& delta() const { return delta_; }

  /// Dense A^T B: entry (i, j) = a_ji * beta_j.
  Eigen::MatrixXd transmission_matrix() const;
  Eigen::MatrixXd curing_matrix() const;  // D = diag(delta)
  /// A^T B - D, the Jacobian of the vector field at the origin.
  Eigen::MatrixXd linearization_at_origin() const;

  friend bool operator==(const EpidemicNetwork&, const EpidemicNetwork&) = default;

 private:
  Digraph graph_;
  std::vector<double> beta_;
  std::vector<double> delta_;
};

/// Throws ModelError unless p has length n and every entry lies in
/// [-slack, 1 + slack].
void check_state(const State& p, std::size_t n, double slack = kStateSlack);

/// xi_i = sum over in-edges (j, i) of a_ji * beta_j * p_j.
State infection_pressure(const EpidemicNetwork& net, const State& p);

/// dp/dt = (A^T B - D) p - P A^T B p, i.e. -delta_i p_i + (1 - p_i) xi_i.
State vector_field(const EpidemicNetwork& net, const State& p);

/// Infinity norm of the vector field at p.
double steady_state_residual(const EpidemicNetwork& net, const State& p);

/// Dynamics of one strongly connected component driven by the rest of the
/// network:
///   dq/dt = (A_i^T B_i - D_i) q - Q A_i^T B_i q + (I - Q) c,
/// where c collects infection arriving over edges from other components.
class SubsystemView {
 public:
  SubsystemView(const EpidemicNetwork& net, const SccDecomposition& d,
                std::size_t component);

  std::size_t component() const { return component_; }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  /// A_i^T B_i restricted to the component (local indices).
  const Eigen::MatrixXd& transmission() const { return transmission_; }
  const Eigen::VectorXd& delta() const { return delta_; }
  /// A_i^T B_i - D_i.
  Eigen::MatrixXd linearization_at_origin() const;

  /// Entries of the full state belonging to this component.
  State restrict(const State& p) const;
  /// c_i = sum_{j != i} A_ji^T B_j q_j evaluated on a full state.
  Eigen::VectorXd coupling(const State& p) const;
  /// Subsystem vector field for local state q and input c.
  Eigen::VectorXd field(const Eigen::VectorXd& q, const Eigen::VectorXd& c) const;

 private:
  struct CrossEdge {
    std::size_t local_dst;
    NodeId src;
    double rate;  // a_ji * beta_j
  };
  std::size_t component_;
  std::vector<NodeId> nodes_;
  Eigen::MatrixXd transmission_;
  Eigen::VectorXd delta_;
  std::vector<CrossEdge> cross_;
};

SubsystemView subsystem(const EpidemicNetwork& net, const SccDecomposition& d,
                        std::size_t component);

}  // namespace sisnet
