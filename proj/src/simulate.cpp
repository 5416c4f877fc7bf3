#include "sisnet/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace sisnet {

namespace {

class Rk4Stepper {
 public:
  Rk4Stepper(const EpidemicNetwork& net, double h) : net_(net), h_(h) {}

  // Advances p in place and returns the clamping correction applied.
  double advance(State& p, std::size_t step_index) {
    k1_ = vector_field(net_, p);
    tmp_ = p + 0.5 * h_ * k1_;
    k2_ = vector_field(net_, tmp_);
    tmp_ = p + 0.5 * h_ * k2_;
    k3_ = vector_field(net_, tmp_);
    tmp_ = p + h_ * k3_;
    k4_ = vector_field(net_, tmp_);
    p += (h_ / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);

    double clamped = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (!std::isfinite(p[i]))
        throw IntegrationError("non-finite state at step " + std::to_string(step_index) +
                                   ", node " + std::to_string(i),
                               step_index, static_cast<std::size_t>(i));
      if (p[i] < 0.0) {
        clamped += -p[i];
        p[i] = 0.0;
      } else if (p[i] > 1.0) {
        clamped += p[i] - 1.0;
        p[i] = 1.0;
      }
    }
    return clamped;
  }

 private:
  const EpidemicNetwork& net_;
  double h_;
  State k1_, k2_, k3_, k4_, tmp_;
};

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

Trajectory integrate(const EpidemicNetwork& net, const State& p0,
                     const IntegrationOptions& opts) {
  check_state(p0, net.size(), 0.0);
  require_positive(opts.step, "step");
  if (!(opts.t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  const std::size_t every = std::max<std::size_t>(1, opts.record_every);
  const auto n_steps = static_cast<std::size_t>(std::ceil(opts.t_end / opts.step - 1e-9));

  Trajectory traj;
  State p = p0;
  traj.times.push_back(0.0);
  traj.states.push_back(p);
  Rk4Stepper rk(net, opts.step);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    traj.clamp_total += rk.advance(p, k);
    traj.steps = k;
    const bool stop = opts.stop_tol > 0.0 && steady_state_residual(net, p) <= opts.stop_tol;
    if (k % every == 0 || k == n_steps || stop) {
      traj.times.push_back(static_cast<double>(k) * opts.step);
      traj.states.push_back(p);
    }
    if (stop) break;
  }
  traj.converged = steady_state_residual(net, p) <= 1e-9;
  return traj;
}

ConvergenceResult converge(const EpidemicNetwork& net, const State& p0,
                           const ConvergeOptions& opts) {
  check_state(p0, net.size(), 0.0);
  require_positive(opts.step, "step");
  require_positive(opts.tol, "tol");
  ConvergenceResult r;
  State p = p0;
  Rk4Stepper rk(net, opts.step);
  r.residual = steady_state_residual(net, p);
  std::size_t k = 0;
  while (r.residual > opts.tol && r.time < opts.t_max) {
    r.clamp_total += rk.advance(p, ++k);
    r.time = static_cast<double>(k) * opts.step;
    r.residual = steady_state_residual(net, p);
  }
  r.converged = r.residual <= opts.tol;
  r.limit = std::move(p);
  return r;
}

std::vector<double> lyapunov_trace(const Trajectory& traj, const State& p_star,
                                   const std::optional<Eigen::VectorXd>& weights) {
  std::vector<double> v;
  v.reserve(traj.states.size());
  for (const auto& p : traj.states) {
    if (p.size() != p_star.size() || (weights && weights->size() != p.size()))
      throw std::invalid_argument("lyapunov_trace: dimension mismatch");
    const Eigen::VectorXd e = p - p_star;
    v.push_back(0.5 * (weights ? e.dot(weights->cwiseProduct(e)) : e.squaredNorm()));
  }
  return v;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const bool with_v = !traj.lyapunov.empty();
  if (with_v && traj.lyapunov.size() != traj.states.size())
    throw std::invalid_argument("lyapunov column length does not match samples");
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  os << 't';
  for (Eigen::Index i = 0; i < n; ++i) os << ",p_" << i;
  if (with_v) os << ",V";
  os << '\n';
  char buf[40];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
  };
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    put(traj.times[k]);
    for (Eigen::Index i = 0; i < n; ++i) {
      os << ',';
      put(traj.states[k][i]);
    }
    if (with_v) {
      os << ',';
      put(traj.lyapunov[k]);
    }
    os << '\n';
  }
}

}  // namespace sisnet
