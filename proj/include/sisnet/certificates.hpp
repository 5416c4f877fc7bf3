#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sisnet/equilibrium.hpp"
#include "sisnet/graph.hpp"
#include "sisnet/model.hpp"

namespace sisnet {

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CertificateRegime { NegativeDefinite, NegativeSemidefinite };

const char* to_string(CertificateRegime r);

/// Acceptance bands for the symmetrized matrix M = X^T R + R X.
inline constexpr double kSemidefiniteBand = 1e-9;      // lambda_max(M) <= band
inline constexpr double kDefiniteRelativeMargin = 1e-12;  // lambda_max <= -margin * |M|_inf
inline constexpr double kNullDirectionTol = 1e-9;       // |M nu|_inf for critical targets

/// Positive diagonal R such that X^T R + R X is negative (semi)definite,
/// which makes V(x) = x^T R x a Lyapunov function for the linear part X.
struct LyapunovCertificate {
  Eigen::VectorXd diagonal;     // r_i > 0
  Eigen::MatrixXd target;       // X
  Eigen::MatrixXd symmetrized;  // M
  double lambda_max = 0.0;
  CertificateRegime regime = CertificateRegime::NegativeDefinite;
  Eigen::VectorXd null_vector;  // nu with X nu = 0 (semidefinite regime only)
  double null_residual = 0.0;   // |M nu|_inf
  std::string certifies;        // what equilibrium/subsystem this covers

  std::string target_hash() const;
};

/// Lambda(p*) = -D + (I - P*) A^T B.
Eigen::MatrixXd lambda_endemic(const EpidemicNetwork& net, const State& p_star);

/// Lambda~(q*) = -D_i - diag(c*) + (I - Q*) A_i^T B_i on one component.
Eigen::MatrixXd lambda_tilde(const SubsystemView& sub, const Eigen::VectorXd& q_star,
                             const Eigen::VectorXd& c_star);

/// Hurwitz Metzler X: nu = -X^{-1} 1, xi = -X^{-T} 1, r_i = xi_i / nu_i.
/// Then M nu = -(1 + r) << 0 and M is symmetric Metzler, hence Hurwitz.
/// Irreducibility is not required by this construction.
LyapunovCertificate diag_certificate_hurwitz(const Eigen::MatrixXd& x);

/// Irreducible Metzler X with mu(X) = 0: nu and xi are the right and left
/// Perron vectors, r_i = xi_i / nu_i, and (X^T R + R X) nu = 0.
LyapunovCertificate diag_certificate_critical(const Eigen::MatrixXd& x);

/// Re-checks the regime bound (and the null direction for critical
/// certificates) on the stored matrices. Throws CertificateError on failure.
void verify_certificate(const LyapunovCertificate& cert);

/// True iff J(p*) p* << 0 (every entry below -1e-12), which certifies that
/// the Metzler matrix J(p*) is Hurwitz. Requires p* >> 0.
bool check_j_pstar_direction(const EpidemicNetwork& net, const State& p_star);

enum class StabilityVerdict { DiseaseFreeGAS, EndemicGAS };

const char* to_string(StabilityVerdict v);

struct ComponentStability {
  std::size_t component = 0;
  LyapunovCertificate certificate;
};

struct StabilityReport {
  StabilityVerdict verdict = StabilityVerdict::DiseaseFreeGAS;
  EquilibriumClass equilibrium = EquilibriumClass::DiseaseFree;
  bool origin_unstable = false;  // some component has R0^i > 1
  std::vector<ComponentStability> components;
  double jacobian_abscissa = 0.0;  // mu(J(p*))
  bool locally_exponentially_stable = false;
  std::optional<bool> jacobian_direction;  // J(p*) p* << 0, strong endemic on an SCC
};

/// Case analysis for the cascade of SCCs: the network settles at the
/// disease-free state iff every R0^i <= 1; otherwise exactly the nodes
/// reachable from a supercritical component stay infected. Each component
/// gets a diagonal certificate for the linear part of its shifted dynamics.
/// Any disagreement between this analysis, the computed equilibrium and the
/// certificates throws CertificateError.
StabilityReport classify_stability(const EpidemicNetwork& net, const SccDecomposition& d,
                                   const EquilibriumReport& report);

}  // namespace sisnet
