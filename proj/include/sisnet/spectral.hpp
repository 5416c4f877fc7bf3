#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sisnet/graph.hpp"
#include "sisnet/model.hpp"

namespace sisnet {

class SpectralError : public std::runtime_error {
 public:
  SpectralError(const std::string& what, std::size_t iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  std::size_t iterations() const { return iterations_; }

 private:
  std::size_t iterations_;
};

class ReducibleMatrixError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PowerIterationOptions {
  double tol = 1e-12;  // on successive unit-max iterates, infinity norm
  std::size_t max_iterations = 100000;
};

/// Perron-Frobenius eigenpair of an irreducible Metzler matrix.
struct PfEigenpair {
  double value = 0.0;     // mu(X); equals rho(X) when X is nonnegative
  Eigen::VectorXd right;  // X v = value v, unit max entry, strictly positive
  Eigen::VectorXd left;   // X^T w = value w, unit max entry, strictly positive
  double right_residual = 0.0;
  double left_residual = 0.0;
  std::size_t iterations = 0;
};

struct AbscissaReport {
  double value = 0.0;
  bool reducible = false;
  std::size_t blocks = 1;  // irreducible diagonal blocks examined
  std::size_t iterations = 0;
};

bool is_metzler(const Eigen::MatrixXd& x);
bool is_nonnegative(const Eigen::MatrixXd& x);

/// Power iteration on X + sI with s = 1 + max|X_ii|. Requires X irreducible
/// Metzler (a 1x1 matrix is always accepted).
PfEigenpair pf_eigenpair(const Eigen::MatrixXd& x, const PowerIterationOptions& opts = {});

/// Largest real part of the spectrum of a Metzler matrix. Reducible inputs
/// are split into irreducible diagonal blocks along the SCCs of the
/// off-diagonal support; the abscissa is the maximum over blocks.
AbscissaReport metzler_abscissa_report(const Eigen::MatrixXd& x,
                                       const PowerIterationOptions& opts = {});
double metzler_abscissa(const Eigen::MatrixXd& x, const PowerIterationOptions& opts = {});

/// rho(X) for entrywise nonnegative X.
double spectral_radius_nonneg(const Eigen::MatrixXd& x,
                              const PowerIterationOptions& opts = {});

/// Next-generation matrix D^{-1} A^T B.
Eigen::MatrixXd next_generation_matrix(const EpidemicNetwork& net);

/// R0 = rho(D^{-1} A^T B).
double basic_reproduction_number(const EpidemicNetwork& net,
                                 const PowerIterationOptions& opts = {});

/// R0^i = rho(D_i^{-1} A_i^T B_i) for every component of the decomposition.
std::vector<double> component_reproduction_numbers(const EpidemicNetwork& net,
                                                   const SccDecomposition& d,
                                                   const PowerIterationOptions& opts = {});

inline constexpr double kCriticalBand = 1e-9;

enum class Threshold { Subcritical, Critical, Supercritical };

const char* to_string(Threshold t);

/// Places R0 relative to 1; |R0 - 1| <= band counts as critical.
Threshold classify_threshold(double r0, double band = kCriticalBand);

}  // namespace sisnet
