#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "sisnet/model.hpp"

namespace sisnet {

// Node i chooses p_i to maximize
//   f_i(p) = -(delta_i / 2) p_i^2 + p_i (1 - p_i / 2) xi_i(p),
// with xi_i = sum_j a_ji beta_j p_j. The partial derivative df_i/dp_i is the
// i-th entry of the SIS vector field, so the epidemic ODE is the gradient
// play of this concave game.

double objective(const EpidemicNetwork& net, NodeId i, const State& p);

/// (df_i/dp_i)_i = -delta_i p_i + (1 - p_i) xi_i.
State best_response_gradient(const EpidemicNetwork& net, const State& p);

/// (d^2 f_i / dp_i^2)_i = -delta_i - xi_i.
Eigen::VectorXd concavity_check(const EpidemicNetwork& net, const State& p);

struct NodeCondition {
  double margin = 0.0;     // delta_i - 1/2 sum_j a_ij beta_j   (out-edges)
  double in_margin = 0.0;  // delta_i - 1/2 sum_j a_ji beta_j   (in-edges)
  bool pass = false;       // margin > 0
  bool in_pass = false;    // in_margin > 0
};

/// Per-node local test 1/2 sum_{j != i} a_ij beta_j < delta_i. The sum runs
/// over out-edges of i, whereas the infection pressure uses in-edges; both
/// directions are reported and `pass` follows the out-edge form.
struct DistributedVerdict {
  std::vector<NodeCondition> nodes;
  bool pass = false;     // every node passes (out-edge form)
  bool in_pass = false;  // every node passes (in-edge form)
};

DistributedVerdict distributed_condition(const EpidemicNetwork& net);

struct DominanceRow {
  double lhs = 0.0;  // 2 |U_i''| = 2 delta_i
  double rhs = 0.0;  // sum_j max over p in {0,1}^2 of |cross partial|
  bool pass = false;
};

/// Diagonal dominance 2|U_i''| > sum_j |d_j d_i g_ij| for the SIS
/// utilities, maximized over the unit box. The cross partial
/// (1 - p) a_ij beta_j is affine in p, so the maximum sits at a vertex.
struct DominanceVerdict {
  std::vector<DominanceRow> nodes;
  bool pass = false;
};

DominanceVerdict diagonal_dominance_check(const EpidemicNetwork& net);

}  // namespace sisnet
