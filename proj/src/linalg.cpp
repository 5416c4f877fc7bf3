#include "sisnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <utility>

namespace sisnet {

Eigen::VectorXd solve_linear(Eigen::MatrixXd x, Eigen::VectorXd b) {
  const auto n = x.rows();
  if (x.cols() != n || b.size() != n)
    throw std::invalid_argument("solve_linear: dimension mismatch");
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    for (Eigen::Index r = k + 1; r < n; ++r)
      if (std::abs(x(r, k)) > std::abs(x(piv, k))) piv = r;
    if (std::abs(x(piv, k)) <= 1e-14 * scale)
      throw SingularMatrixError("solve_linear: matrix is singular to working precision");
    if (piv != k) {
      x.row(k).swap(x.row(piv));
      std::swap(b[k], b[piv]);
    }
    for (Eigen::Index r = k + 1; r < n; ++r) {
      const double f = x(r, k) / x(k, k);
      if (f == 0.0) continue;
      x.row(r).tail(n - k) -= f * x.row(k).tail(n - k);
      b[r] -= f * b[k];
    }
  }
  Eigen::VectorXd z(n);
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    double s = b[k];
    for (Eigen::Index c = k + 1; c < n; ++c) s -= x(k, c) * z[c];
    z[k] = s / x(k, k);
  }
  return z;
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m,
                                      const SymmetricEigenOptions& opts) {
  const auto n = m.rows();
  if (m.cols() != n) throw std::invalid_argument("symmetric_eigenvalues: not square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("symmetric_eigenvalues: matrix is not symmetric");
  Eigen::MatrixXd a = 0.5 * (m + m.transpose());
  const double norm = std::max(a.norm(), 1e-300);

  auto off = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  for (std::size_t sweep = 0; sweep < opts.max_sweeps && off() > opts.tol * norm; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation annihilating a(p, q).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
      }
    }
  }
  Eigen::VectorXd ev = a.diagonal();
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

double max_symmetric_eigenvalue(const Eigen::MatrixXd& m, const SymmetricEigenOptions& opts) {
  return symmetric_eigenvalues(m, opts).maxCoeff();
}

std::string matrix_hash(const Eigen::MatrixXd& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < len; ++k) {
      h ^= bytes[k];
      h *= 0x100000001b3ULL;
    }
  };
  auto mix_u64 = [&](std::uint64_t v) {
    unsigned char le[8];
    for (int k = 0; k < 8; ++k) le[k] = static_cast<unsigned char>(v >> (8 * k));
    mix(le, 8);
  };
  mix_u64(static_cast<std::uint64_t>(m.rows()));
  mix_u64(static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double v = m(i, j);
      if (v == 0.0) v = 0.0;  // fold -0 into +0
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      mix_u64(bits);
    }
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k) {
    out[k] = kHex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace sisnet
