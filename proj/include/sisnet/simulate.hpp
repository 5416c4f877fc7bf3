#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "sisnet/model.hpp"

namespace sisnet {

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, std::size_t step, std::size_t node)
      : std::runtime_error(what), step_(step), node_(node) {}
  std::size_t step() const { return step_; }
  std::size_t node() const { return node_; }

 private:
  std::size_t step_, node_;
};

struct IntegrationOptions {
  double t_end = 100.0;
  double step = 1e-2;
  std::size_t record_every = 1;
  double stop_tol = 0.0;  // stop early once |Phi(p)|_inf <= stop_tol (0 disables)
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> lyapunov;  // optional V column, empty when unset
  double clamp_total = 0.0;      // sum of clamping corrections
  bool converged = false;
  std::size_t steps = 0;
};

/// Fixed-step classical RK4 on the SIS vector field. States are clamped to
/// [0, 1] after each step; the total clamping magnitude is recorded. Every
/// record_every-th step is stored, plus the initial and final states.
Trajectory integrate(const EpidemicNetwork& net, const State& p0,
                     const IntegrationOptions& opts = {});

struct ConvergeOptions {
  double tol = 1e-9;  // on the residual |Phi(p)|_inf
  double t_max = 1e4;
  double step = 1e-2;
};

struct ConvergenceResult {
  State limit;
  double time = 0.0;
  bool converged = false;
  double residual = 0.0;
  double clamp_total = 0.0;
};

/// Integrates until the vector field falls below tol or t_max is reached.
ConvergenceResult converge(const EpidemicNetwork& net, const State& p0,
                           const ConvergeOptions& opts = {});

/// V_k = 1/2 (p_k - p*)^T R (p_k - p*), R = I unless a diagonal is given.
std::vector<double> lyapunov_trace(const Trajectory& traj, const State& p_star,
                                   const std::optional<Eigen::VectorXd>& weights = {});

/// CSV with header "t,p_0,...,p_{n-1}[,V]", numbers printed with 17
/// significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace sisnet
