#include "sisnet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sisnet/model.hpp"

namespace sisnet {

namespace {

struct Dominant {
  double value = 0.0;
  Eigen::VectorXd vec;
  std::size_t iterations = 0;
};

// Dominant eigenpair of a primitive nonnegative matrix, starting from the
// all-ones vector and normalizing to unit max entry each step.
Dominant power_iterate(const Eigen::MatrixXd& y, const PowerIterationOptions& opts) {
  const auto n = y.rows();
  Dominant out;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd w(n);
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    w.noalias() = y * v;
    const double scale = w.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(scale))
      throw SpectralError("power iteration produced a non-finite iterate", it);
    if (scale < 1e-300) {
      out.value = 0.0;
      out.vec = v;
      out.iterations = it;
      return out;
    }
    w /= scale;
    const double gap = (w - v).lpNorm<Eigen::Infinity>();
    v.swap(w);
    if (gap < opts.tol) {
      const Eigen::VectorXd yv = y * v;
      out.value = v.dot(yv) / v.squaredNorm();
      out.vec = v;
      out.iterations = it;
      return out;
    }
  }
  throw SpectralError("power iteration did not converge within " +
                          std::to_string(opts.max_iterations) + " iterations",
                      opts.max_iterations);
}

double diagonal_shift(const Eigen::MatrixXd& x) {
  return 1.0 + x.diagonal().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& x,
                                    const std::vector<NodeId>& idx) {
  const auto m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd s(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) s(a, b) = x(idx[a], idx[b]);
  return s;
}

void require_square(const Eigen::MatrixXd& x, const char* who) {
  if (x.rows() != x.cols() || x.rows() == 0)
    throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty");
}

}  // namespace

bool is_metzler(const Eigen::MatrixXd& x) {
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (i != j && !(x(i, j) >= 0.0)) return false;
  return true;
}

bool is_nonnegative(const Eigen::MatrixXd& x) {
  return (x.array() >= 0.0).all();
}

PfEigenpair pf_eigenpair(const Eigen::MatrixXd& x, const PowerIterationOptions& opts) {
  require_square(x, "pf_eigenpair");
  if (!is_metzler(x))
    throw std::invalid_argument("pf_eigenpair: matrix is not Metzler");
  const auto n = x.rows();
  PfEigenpair pf;
  if (n == 1) {
    pf.value = x(0, 0);
    pf.right = pf.left = Eigen::VectorXd::Ones(1);
    return pf;
  }
  if (scc_decompose(support_digraph(x)).count() != 1)
    throw ReducibleMatrixError("pf_eigenpair: matrix is reducible");

  const double s = diagonal_shift(x);
  Eigen::MatrixXd y = x;
  y.diagonal().array() += s;
  const Dominant r = power_iterate(y, opts);
  const Dominant l = power_iterate(y.transpose(), opts);

  pf.value = r.value - s;
  pf.right = r.vec;
  pf.left = l.vec;
  pf.iterations = r.iterations + l.iterations;
  if (pf.right.minCoeff() <= 0.0 || pf.left.minCoeff() <= 0.0)
    throw SpectralError("Perron vector is not strictly positive", pf.iterations);
  pf.right_residual = (x * pf.right - pf.value * pf.right).lpNorm<Eigen::Infinity>();
  pf.left_residual =
      (x.transpose() * pf.left - pf.value * pf.left).lpNorm<Eigen::Infinity>();
  return pf;
}

AbscissaReport metzler_abscissa_report(const Eigen::MatrixXd& x,
                                       const PowerIterationOptions& opts) {
  require_square(x, "metzler_abscissa");
  if (!is_metzler(x))
    throw std::invalid_argument("metzler_abscissa: matrix is not Metzler");
  AbscissaReport rep;
  if (x.rows() == 1) {
    rep.value = x(0, 0);
    return rep;
  }
  const auto d = scc_decompose(support_digraph(x));
  rep.blocks = d.count();
  rep.reducible = d.count() > 1;
  rep.value = -std::numeric_limits<double>::infinity();
  for (const auto& comp : d.components) {
    double v;
    if (comp.size() == 1) {
      v = x(comp[0], comp[0]);
    } else {
      const auto block = principal_submatrix(x, comp);
      const double s = diagonal_shift(block);
      Eigen::MatrixXd y = block;
      y.diagonal().array() += s;
      const Dominant dom = power_iterate(y, opts);
      rep.iterations += dom.iterations;
      v = dom.value - s;
    }
    rep.value = std::max(rep.value, v);
  }
  return rep;
}

double metzler_abscissa(const Eigen::MatrixXd& x, const PowerIterationOptions& opts) {
  return metzler_abscissa_report(x, opts).value;
}

double spectral_radius_nonneg(const Eigen::MatrixXd& x, const PowerIterationOptions& opts) {
  require_square(x, "spectral_radius_nonneg");
  if (!is_nonnegative(x))
    throw std::invalid_argument("spectral_radius_nonneg: matrix has negative entries");
  // For nonnegative X the Perron root is real and dominates, so rho = mu.
  return std::max(0.0, metzler_abscissa(x, opts));
}

Eigen::MatrixXd next_generation_matrix(const EpidemicNetwork& net) {
  Eigen::MatrixXd m = net.transmission_matrix();
  for (std::size_t i = 0; i < net.size(); ++i) m.row(i) /= net.delta()[i];
  return m;
}

double basic_reproduction_number(const EpidemicNetwork& net,
                                 const PowerIterationOptions& opts) {
  return spectral_radius_nonneg(next_generation_matrix(net), opts);
}

std::vector<double> component_reproduction_numbers(const EpidemicNetwork& net,
                                                   const SccDecomposition& d,
                                                   const PowerIterationOptions& opts) {
  std::vector<double> r0(d.count());
  for (std::size_t c = 0; c < d.count(); ++c) {
    const SubsystemView sub(net, d, c);
    Eigen::MatrixXd m = sub.transmission();
    for (Eigen::Index k = 0; k < m.rows(); ++k) m.row(k) /= sub.delta()[k];
    r0[c] = spectral_radius_nonneg(m, opts);
  }
  return r0;
}

const char* to_string(Threshold t) {
  switch (t) {
    case Threshold::Subcritical: return "subcritical";
    case Threshold::Critical: return "critical";
    case Threshold::Supercritical: return "supercritical";
  }
  return "?";
}

Threshold classify_threshold(double r0, double band) {
  if (std::abs(r0 - 1.0) <= band) return Threshold::Critical;
  return r0 < 1.0 ? Threshold::Subcritical : Threshold::Supercritical;
}

}  // namespace sisnet
