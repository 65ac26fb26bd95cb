// Reference computations written independently of the library kernels.
#pragma once

#include "scbell/qmat.hpp"

#include <cmath>
#include <complex>

namespace oracle {

using scbell::Complex;
using scbell::Matrix;

/// (a (x) b)[i q + k, j q + l] = a[i, j] b[k, l]
inline Matrix kron_by_index(const Matrix& a, const Matrix& b) {
  const auto q = b.rows(), r = b.cols();
  Matrix out(a.rows() * q, a.cols() * r);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < q; ++k)
        for (Eigen::Index l = 0; l < r; ++l) out(i * q + k, j * r + l) = a(i, j) * b(k, l);
  return out;
}

/// Eigenvalues (ascending) of [[p, c], [c*, s]] from the quadratic formula.
inline std::pair<double, double> eig2(double p, double s, Complex c) {
  const double mean = 0.5 * (p + s);
  const double half = std::sqrt(0.25 * (p - s) * (p - s) + std::norm(c));
  return {mean - half, mean + half};
}

inline double h2(double x) {
  auto t = [](double v) { return v > 0.0 ? -v * std::log2(v) : 0.0; };
  return t(x) + t(1.0 - x);
}

/// Concurrence of a two-qubit X state.
inline double x_state_concurrence(const Matrix& rho) {
  const double outer = std::abs(rho(0, 3)) - std::sqrt(rho(1, 1).real() * rho(2, 2).real());
  const double inner = std::abs(rho(1, 2)) - std::sqrt(rho(0, 0).real() * rho(3, 3).real());
  return 2.0 * std::max({0.0, outer, inner});
}

/// Trace over qubit 1 of a two-qubit matrix by explicit summation.
inline Matrix trace_second_qubit(const Matrix& m) {
  Matrix out = Matrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out(i, j) += m(2 * i + k, 2 * j + k);
  return out;
}

}  // namespace oracle
