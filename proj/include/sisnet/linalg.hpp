#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sisnet {

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves X z = b by Gaussian elimination with partial pivoting.
Eigen::VectorXd solve_linear(Eigen::MatrixXd x, Eigen::VectorXd b);

struct SymmetricEigenOptions {
  double tol = 1e-12;  // off-diagonal Frobenius norm relative to the matrix norm
  std::size_t max_sweeps = 100;
};

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m,
                                      const SymmetricEigenOptions& opts = {});

double max_symmetric_eigenvalue(const Eigen::MatrixXd& m,
                                const SymmetricEigenOptions& opts = {});

/// FNV-1a 64 over the IEEE-754 bytes of rows, cols and the entries in
/// row-major order (little-endian), rendered as 16 hex digits.
std::string matrix_hash(const Eigen::MatrixXd& m);

}  // namespace sisnet
