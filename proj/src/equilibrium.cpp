#include "sisnet/equilibrium.hpp"

#include <cmath>
#include <string>

namespace sisnet {

FixedPointProblem::FixedPointProblem(Eigen::MatrixXd x, Eigen::VectorXd y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() != x_.cols() || x_.rows() != y_.size() || y_.size() == 0)
    throw std::invalid_argument("FixedPointProblem: dimension mismatch");
  if (!x_.allFinite() || (x_.array() < 0.0).any())
    throw std::invalid_argument("FixedPointProblem: X must be nonnegative");
  for (Eigen::Index i = 0; i < y_.size(); ++i)
    if (!(y_[i] >= 0.0 && y_[i] < 1.0))
      throw std::invalid_argument("FixedPointProblem: y_" + std::to_string(i) +
                                  " must lie in [0, 1)");
}

State apply_T(const FixedPointProblem& fp, const State& p) {
  if (static_cast<std::size_t>(p.size()) != fp.size())
    throw std::invalid_argument("apply_T: dimension mismatch");
  const Eigen::VectorXd xp = fp.x() * p;
  return ((xp + fp.y()).array() / (1.0 + xp.array())).matrix();
}

namespace {

FixedPointResult iterate(const FixedPointProblem& fp, State p, bool check_descent,
                         const FixedPointOptions& opts) {
  constexpr double kDescentSlack = 1e-14;
  FixedPointResult r;
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    State next = apply_T(fp, p);
    if (check_descent) {
      for (Eigen::Index i = 0; i < p.size(); ++i)
        if (next[i] > p[i] + kDescentSlack)
          throw std::logic_error("fixed-point iteration stopped descending at step " +
                                 std::to_string(it));
    }
    r.last_gap = (next - p).lpNorm<Eigen::Infinity>();
    p.swap(next);
    r.iterations = it;
    if (r.last_gap < opts.tol) {
      r.converged = true;
      break;
    }
  }
  r.state = std::move(p);
  return r;
}

}  // namespace

FixedPointResult solve_fixed_point(const FixedPointProblem& fp, const FixedPointOptions& opts) {
  return iterate(fp, State::Ones(fp.size()), true, opts);
}

FixedPointResult solve_fixed_point_from(const FixedPointProblem& fp, const State& start,
                                        const FixedPointOptions& opts) {
  check_state(start, fp.size(), 0.0);
  return iterate(fp, start, false, opts);
}

SccEquilibrium endemic_state_scc(const SubsystemView& sub, const Eigen::VectorXd& c_star,
                                 const FixedPointOptions& opts) {
  const auto m = sub.size();
  if (static_cast<std::size_t>(c_star.size()) != m)
    throw std::invalid_argument("endemic_state_scc: input has wrong dimension");
  if ((c_star.array() < 0.0).any())
    throw std::invalid_argument("endemic_state_scc: input must be nonnegative");

  SccEquilibrium out;
  Eigen::MatrixXd ngm = sub.transmission();
  for (Eigen::Index k = 0; k < ngm.rows(); ++k) ngm.row(k) /= sub.delta()[k];
  out.r0 = spectral_radius_nonneg(ngm);
  out.threshold = classify_threshold(out.r0);

  const bool driven = (c_star.array() > 0.0).any();
  if (!driven && out.threshold != Threshold::Supercritical) {
    out.state = Eigen::VectorXd::Zero(m);
    return out;
  }

  const Eigen::VectorXd g = sub.delta() + c_star;
  Eigen::MatrixXd x = sub.transmission();
  for (Eigen::Index k = 0; k < x.rows(); ++k) x.row(k) /= g[k];
  const Eigen::VectorXd y = c_star.cwiseQuotient(g);
  const FixedPointResult fp = solve_fixed_point(FixedPointProblem(std::move(x), y), opts);
  out.state = fp.state;
  out.iterations = fp.iterations;
  out.converged = fp.converged;
  return out;
}

const char* to_string(EquilibriumClass c) {
  switch (c) {
    case EquilibriumClass::DiseaseFree: return "disease_free";
    case EquilibriumClass::WeakEndemic: return "weak_endemic";
    case EquilibriumClass::StrongEndemic: return "strong_endemic";
  }
  return "?";
}

EquilibriumReport equilibrium_cascade(const EpidemicNetwork& net, const SccDecomposition& d,
                                      const FixedPointOptions& opts) {
  EquilibriumReport rep;
  rep.p_star = State::Zero(net.size());
  rep.components.resize(d.count());
  rep.order = d.order;

  for (const auto c : d.order) {
    const SubsystemView sub(net, d, c);
    const Eigen::VectorXd input = sub.coupling(rep.p_star);
    const SccEquilibrium eq = endemic_state_scc(sub, input, opts);
    if (!eq.converged)
      throw EquilibriumError("fixed-point iteration for component " + std::to_string(c) +
                             " did not converge in " + std::to_string(eq.iterations) +
                             " iterations");
    // An SCC is either entirely healthy or entirely infected.
    if (eq.state.maxCoeff() > kPositivityThreshold && eq.state.minCoeff() <= 0.0)
      throw EquilibriumError("component " + std::to_string(c) +
                             " has a partially positive endemic state");

    auto& ce = rep.components[c];
    ce.component = c;
    ce.nodes = sub.nodes();
    ce.r0 = eq.r0;
    ce.threshold = eq.threshold;
    ce.input = input;
    ce.state = eq.state;
    ce.iterations = eq.iterations;
    rep.iterations += eq.iterations;
    for (std::size_t k = 0; k < ce.nodes.size(); ++k) rep.p_star[ce.nodes[k]] = eq.state[k];
  }

  rep.residual = steady_state_residual(net, rep.p_star);
  if (!(rep.residual <= kEquilibriumResidualTol))
    throw EquilibriumError("equilibrium residual " + std::to_string(rep.residual) +
                           " exceeds tolerance");

  const double hi = rep.p_star.maxCoeff(), lo = rep.p_star.minCoeff();
  if (hi <= kPositivityThreshold)
    rep.classification = EquilibriumClass::DiseaseFree;
  else if (lo > kPositivityThreshold)
    rep.classification = EquilibriumClass::StrongEndemic;
  else
    rep.classification = EquilibriumClass::WeakEndemic;
  return rep;
}

EquilibriumReport equilibrium_cascade(const EpidemicNetwork& net,
                                      const FixedPointOptions& opts) {
  return equilibrium_cascade(net, scc_decompose(net.graph()), opts);
}

Eigen::MatrixXd jacobian_at(const EpidemicNetwork& net, const State& p_star) {
  const auto n = net.size();
  if (static_cast<std::size_t>(p_star.size()) != n)
    throw ModelError("jacobian_at: state dimension mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!(p_star[i] < 1.0))
      throw ModelError("jacobian_at: p*_" + std::to_string(i) +
                       " = 1 makes (I - P*) singular");
  Eigen::MatrixXd j = net.transmission_matrix();
  for (std::size_t i = 0; i < n; ++i) {
    j.row(i) *= 1.0 - p_star[i];
    j(i, i) = -net.delta()[i] / (1.0 - p_star[i]);
  }
  return j;
}

}  // namespace sisnet
