#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "sisnet/graph.hpp"
#include "sisnet/model.hpp"
#include "sisnet/spectral.hpp"

namespace sisnet {

class EquilibriumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// T(p) = (I + diag(X p))^{-1} (X p + y) with X >= 0 and 0 <= y << 1.
class FixedPointProblem {
 public:
  FixedPointProblem(Eigen::MatrixXd x, Eigen::VectorXd y);

  const Eigen::MatrixXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  std::size_t size() const { return static_cast<std::size_t>(y_.size()); }

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
};

/// Componentwise ((Xp)_i + y_i) / (1 + (Xp)_i).
State apply_T(const FixedPointProblem& fp, const State& p);

struct FixedPointOptions {
  double tol = 1e-12;  // on the iterate gap, infinity norm
  std::size_t max_iterations = 10'000'000;
};

struct FixedPointResult {
  State state;
  std::size_t iterations = 0;
  bool converged = false;
  double last_gap = 0.0;
};

/// Iterates T from the all-ones vector. T is monotone and T(1) <= 1, so
/// the iterates descend componentwise to the greatest fixed point; a
/// violated descent step throws std::logic_error. Hitting max_iterations
/// returns the last iterate with converged = false.
FixedPointResult solve_fixed_point(const FixedPointProblem& fp,
                                   const FixedPointOptions& opts = {});

/// Same iteration from an arbitrary start in [0, 1]^n (no descent check).
FixedPointResult solve_fixed_point_from(const FixedPointProblem& fp, const State& start,
                                        const FixedPointOptions& opts = {});

/// Entries below this are treated as zero when classifying equilibria.
inline constexpr double kPositivityThreshold = 1e-10;
inline constexpr double kEquilibriumResidualTol = 1e-9;

struct SccEquilibrium {
  Eigen::VectorXd state;
  double r0 = 0.0;
  Threshold threshold = Threshold::Subcritical;
  std::size_t iterations = 0;
  bool converged = true;
};

/// Endemic state of one SCC driven by the steady input c_star: solves the
/// fixed point with G = D_i + diag(c), X = G^{-1} A_i^T B_i, y = G^{-1} c.
/// Without input and with R0^i <= 1 (critical band included) returns 0.
SccEquilibrium endemic_state_scc(const SubsystemView& sub, const Eigen::VectorXd& c_star,
                                 const FixedPointOptions& opts = {});

enum class EquilibriumClass { DiseaseFree, WeakEndemic, StrongEndemic };

const char* to_string(EquilibriumClass c);

struct ComponentEquilibrium {
  std::size_t component = 0;
  std::vector<NodeId> nodes;
  double r0 = 0.0;
  Threshold threshold = Threshold::Subcritical;
  Eigen::VectorXd input;  // c_i^*
  Eigen::VectorXd state;  // q_i^*
  std::size_t iterations = 0;

  bool driven() const { return (input.array() > 0.0).any(); }
  bool infected() const { return state.size() > 0 && state.maxCoeff() > kPositivityThreshold; }
  /// Critical component without input: reported as disease free.
  bool critical() const { return threshold == Threshold::Critical && !driven(); }
};

struct EquilibriumReport {
  std::vector<ComponentEquilibrium> components;  // indexed by component number
  std::vector<std::size_t> order;                // processing order
  EquilibriumClass classification = EquilibriumClass::DiseaseFree;
  State p_star;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Solves components in topological order, feeding each the steady input
/// produced by its already-solved upstream components.
EquilibriumReport equilibrium_cascade(const EpidemicNetwork& net, const SccDecomposition& d,
                                      const FixedPointOptions& opts = {});

EquilibriumReport equilibrium_cascade(const EpidemicNetwork& net,
                                      const FixedPointOptions& opts = {});

/// J(p*) = -(I - P*)^{-1} D + (I - P*) A^T B. Throws ModelError if some
/// entry of p* is >= 1.
Eigen::MatrixXd jacobian_at(const EpidemicNetwork& net, const State& p_star);

}  // namespace sisnet
