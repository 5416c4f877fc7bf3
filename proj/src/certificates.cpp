#include "sisnet/certificates.hpp"

#include <cmath>
#include <string>

#include "sisnet/linalg.hpp"
#include "sisnet/spectral.hpp"

namespace sisnet {

namespace {

constexpr double kCriticalAbscissaTol = 1e-8;  // relative to max(1, |X|_inf)

double inf_norm(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

LyapunovCertificate assemble(const Eigen::MatrixXd& x, Eigen::VectorXd r,
                             CertificateRegime regime) {
  LyapunovCertificate c;
  c.diagonal = std::move(r);
  c.target = x;
  c.symmetrized = x.transpose() * c.diagonal.asDiagonal();
  c.symmetrized += c.diagonal.asDiagonal() * x;
  c.symmetrized = 0.5 * (c.symmetrized + c.symmetrized.transpose());
  c.lambda_max = max_symmetric_eigenvalue(c.symmetrized);
  c.regime = regime;
  return c;
}

void require_metzler_square(const Eigen::MatrixXd& x, const char* who) {
  if (x.rows() != x.cols() || x.rows() == 0)
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  if (!is_metzler(x)) throw std::invalid_argument(std::string(who) + ": matrix is not Metzler");
}

}  // namespace

const char* to_string(CertificateRegime r) {
  return r == CertificateRegime::NegativeDefinite ? "negative_definite"
                                                  : "negative_semidefinite";
}

std::string LyapunovCertificate::target_hash() const { return matrix_hash(target); }

Eigen::MatrixXd lambda_endemic(const EpidemicNetwork& net, const State& p_star) {
  check_state(p_star, net.size());
  Eigen::MatrixXd l = net.transmission_matrix();
  for (std::size_t i = 0; i < net.size(); ++i) {
    l.row(i) *= 1.0 - p_star[i];
    l(i, i) -= net.delta()[i];
  }
  return l;
}

Eigen::MatrixXd lambda_tilde(const SubsystemView& sub, const Eigen::VectorXd& q_star,
                             const Eigen::VectorXd& c_star) {
  const auto m = static_cast<Eigen::Index>(sub.size());
  if (q_star.size() != m || c_star.size() != m)
    throw std::invalid_argument("lambda_tilde: dimension mismatch");
  Eigen::MatrixXd l = sub.transmission();
  for (Eigen::Index k = 0; k < m; ++k) {
    l.row(k) *= 1.0 - q_star[k];
    l(k, k) -= sub.delta()[k] + c_star[k];
  }
  return l;
}

LyapunovCertificate diag_certificate_hurwitz(const Eigen::MatrixXd& x) {
  require_metzler_square(x, "diag_certificate_hurwitz");
  const auto n = x.rows();
  const Eigen::VectorXd minus_ones = -Eigen::VectorXd::Ones(n);
  Eigen::VectorXd nu, xi;
  try {
    nu = solve_linear(x, minus_ones);
    xi = solve_linear(x.transpose(), minus_ones);
  } catch (const SingularMatrixError& e) {
    throw CertificateError(std::string("Hurwitz certificate: ") + e.what());
  }
  if (nu.minCoeff() <= 0.0 || xi.minCoeff() <= 0.0)
    throw CertificateError("Hurwitz certificate: -X^{-1} 1 is not strictly positive, "
                           "so X is not Hurwitz");
  auto cert = assemble(x, xi.cwiseQuotient(nu), CertificateRegime::NegativeDefinite);
  verify_certificate(cert);
  return cert;
}

LyapunovCertificate diag_certificate_critical(const Eigen::MatrixXd& x) {
  require_metzler_square(x, "diag_certificate_critical");
  PfEigenpair pf;
  try {
    pf = pf_eigenpair(x);
  } catch (const ReducibleMatrixError& e) {
    throw CertificateError(std::string("critical certificate: ") + e.what());
  }
  if (std::abs(pf.value) > kCriticalAbscissaTol * std::max(1.0, inf_norm(x)))
    throw CertificateError("critical certificate: mu(X) = " + std::to_string(pf.value) +
                           " is not zero");
  auto cert = assemble(x, pf.left.cwiseQuotient(pf.right),
                       CertificateRegime::NegativeSemidefinite);
  cert.null_vector = pf.right;
  cert.null_residual = (cert.symmetrized * pf.right).lpNorm<Eigen::Infinity>();
  verify_certificate(cert);
  return cert;
}

void verify_certificate(const LyapunovCertificate& cert) {
  if (cert.diagonal.size() == 0 || cert.diagonal.minCoeff() <= 0.0)
    throw CertificateError("certificate diagonal is not strictly positive");
  if (cert.regime == CertificateRegime::NegativeDefinite) {
    const double bound = -kDefiniteRelativeMargin * inf_norm(cert.symmetrized);
    if (!(cert.lambda_max <= bound))
      throw CertificateError("definite certificate fails: lambda_max = " +
                             std::to_string(cert.lambda_max));
  } else {
    if (!(cert.lambda_max <= kSemidefiniteBand))
      throw CertificateError("semidefinite certificate fails: lambda_max = " +
                             std::to_string(cert.lambda_max));
    if (!(cert.null_residual <= kNullDirectionTol))
      throw CertificateError("semidefinite certificate fails: |M nu| = " +
                             std::to_string(cert.null_residual));
  }
}

bool check_j_pstar_direction(const EpidemicNetwork& net, const State& p_star) {
  check_state(p_star, net.size());
  if (!(p_star.minCoeff() > 0.0))
    throw std::invalid_argument("check_j_pstar_direction: p* must be strictly positive");
  const Eigen::VectorXd jp = jacobian_at(net, p_star) * p_star;
  return jp.maxCoeff() < -1e-12;
}

const char* to_string(StabilityVerdict v) {
  return v == StabilityVerdict::DiseaseFreeGAS ? "disease_free_gas" : "endemic_gas";
}

StabilityReport classify_stability(const EpidemicNetwork& net, const SccDecomposition& d,
                                   const EquilibriumReport& report) {
  if (report.components.size() != d.count())
    throw std::invalid_argument("classify_stability: report does not match decomposition");
  StabilityReport out;
  out.equilibrium = report.classification;

  std::vector<std::size_t> supercritical;
  for (const auto& ce : report.components)
    if (ce.threshold == Threshold::Supercritical) supercritical.push_back(ce.component);
  out.origin_unstable = !supercritical.empty();
  out.verdict = supercritical.empty() ? StabilityVerdict::DiseaseFreeGAS
                                      : StabilityVerdict::EndemicGAS;

  if ((out.verdict == StabilityVerdict::DiseaseFreeGAS) !=
      (report.classification == EquilibriumClass::DiseaseFree))
    throw CertificateError(std::string("verdict ") + to_string(out.verdict) +
                           " contradicts computed equilibrium " +
                           to_string(report.classification));

  for (const auto c : d.order) {
    const auto& ce = report.components[c];
    bool reached = false;
    for (const auto s : supercritical) reached = reached || d.reaches(s, c);
    if (reached != ce.infected())
      throw CertificateError("component " + std::to_string(c) +
                             (reached ? " is reachable from a supercritical component but "
                                        "its equilibrium is zero"
                                      : " is not reachable from any supercritical "
                                        "component but its equilibrium is positive"));

    const SubsystemView sub(net, d, c);
    ComponentStability cs;
    cs.component = c;
    if (!ce.infected()) {
      const Eigen::MatrixXd x = sub.linearization_at_origin();
      cs.certificate = ce.threshold == Threshold::Critical ? diag_certificate_critical(x)
                                                           : diag_certificate_hurwitz(x);
      cs.certificate.certifies = "component " + std::to_string(c) + " disease-free";
    } else {
      const Eigen::MatrixXd x = lambda_tilde(sub, ce.state, ce.input);
      if (ce.driven()) {
        cs.certificate = diag_certificate_hurwitz(x);
        cs.certificate.certifies = "component " + std::to_string(c) + " driven endemic";
      } else {
        cs.certificate = diag_certificate_critical(x);
        cs.certificate.certifies = "component " + std::to_string(c) + " endemic";
      }
    }
    out.components.push_back(std::move(cs));
  }

  const Eigen::MatrixXd j = jacobian_at(net, report.p_star);
  out.jacobian_abscissa = metzler_abscissa(j);
  out.locally_exponentially_stable = out.jacobian_abscissa < 0.0;

  if (d.count() == 1 && report.classification == EquilibriumClass::StrongEndemic) {
    out.jacobian_direction = check_j_pstar_direction(net, report.p_star);
    if (!*out.jacobian_direction || !out.locally_exponentially_stable)
      throw CertificateError("endemic state on a strongly connected graph failed the "
                             "local exponential stability check");
  }
  return out;
}

}  // namespace sisnet
