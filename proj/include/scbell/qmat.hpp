// Dense complex linear algebra for small n-qubit density matrices.
//
// Qubit 0 is the most significant (leftmost) factor of a Kronecker product,
// so basis index i of an n-qubit matrix carries qubit q in bit (n - 1 - q).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace scbell {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double tol_herm = 1e-12;
inline constexpr double tol_trace = 1e-12;
inline constexpr double tol_psd = -1e-10;
inline constexpr double log_cutoff = 1e-12;
inline constexpr int max_qubits = 12;

/// A mathematical constraint on an input was violated. `constraint()` names it.
class InvariantViolation : public std::invalid_argument {
 public:
  InvariantViolation(std::string constraint, const std::string& detail)
      : std::invalid_argument(constraint + ": " + detail), constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// ---------------------------------------------------------------------------
// Complex scalar text form: `<re>(+|-)<im>i`, shortest round-trip digits.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view s, std::string_view whole) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw std::invalid_argument("malformed complex number '" + std::string(whole) + "'");
  return v;
}

}  // namespace detail

inline std::string format_complex(Complex z) {
  std::string out = detail::shortest(z.real());
  double im = z.imag();
  if (std::signbit(im)) {
    out += '-';
    im = -im;
  } else {
    out += '+';
  }
  out += detail::shortest(im);
  out += 'i';
  return out;
}

/// Accepts `re`, `im i`, or `re(+|-)im i`; exponents like `1e-3` are allowed.
inline Complex parse_complex(std::string_view text) {
  auto first = text.find_first_not_of(" \t");
  auto last = text.find_last_not_of(" \t\r");
  if (first == std::string_view::npos)
    throw std::invalid_argument("empty complex number");
  std::string_view s = text.substr(first, last - first + 1);

  if (s.back() != 'i') return {detail::parse_real(s, s), 0.0};

  std::string_view body = s.substr(0, s.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, detail::parse_real(body, s)};
  return {detail::parse_real(body.substr(0, split), s), detail::parse_real(body.substr(split), s)};
}

// ---------------------------------------------------------------------------
// Basic matrices and helpers
// ---------------------------------------------------------------------------

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

/// Largest entrywise modulus.
inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const Matrix& m) { return max_abs(m - m.adjoint()); }

inline bool all_finite(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

/// Number of qubits n with dim == 2^n, or -1.
inline int qubits_for_dim(Eigen::Index dim) {
  for (int n = 0; n <= 30; ++n)
    if ((Eigen::Index{1} << n) == dim) return n;
  return -1;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix kron(std::initializer_list<Matrix> factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition
// ---------------------------------------------------------------------------

struct EigenSystem {
  RealVector values;  // ascending
  Matrix vectors;     // columns are eigenvectors
};

inline EigenSystem eig_hermitian(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("eig_hermitian: matrix is not square");
  const double defect = hermiticity_defect(m);
  if (!(defect <= tol_herm))
    throw InvariantViolation("hermitian", "max |M - M^dagger| = " + std::to_string(defect));
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline Matrix from_spectrum(const EigenSystem& es, const RealVector& spectrum) {
  return es.vectors * spectrum.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

/// Base-2 matrix logarithm restricted to the support: eigenvalues at or below
/// `cutoff` contribute 0 to the log spectrum.
inline Matrix log_on_support(const Matrix& m, double cutoff = log_cutoff) {
  const EigenSystem es = eig_hermitian(m);
  if (es.values.size() > 0 && es.values.minCoeff() < tol_psd)
    throw InvariantViolation("positive semidefinite",
                             "eigenvalue " + std::to_string(es.values.minCoeff()));
  RealVector logs = es.values.unaryExpr([cutoff](double v) { return v > cutoff ? std::log2(v) : 0.0; });
  return from_spectrum(es, logs);
}

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

/// Validated n-qubit state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols()) throw DimensionMismatch("density matrix must be square");
    n_qubits_ = qubits_for_dim(mat_.rows());
    if (n_qubits_ < 1 || n_qubits_ > max_qubits)
      throw DimensionMismatch("density matrix dimension " + std::to_string(mat_.rows()) +
                              " is not 2^n with 1 <= n <= " + std::to_string(max_qubits));
    if (!all_finite(mat_)) throw InvariantViolation("finite", "non-finite entry");
    const double defect = hermiticity_defect(mat_);
    if (!(defect <= tol_herm))
      throw InvariantViolation("hermitian", "max |M - M^dagger| = " + std::to_string(defect));
    const Complex tr = mat_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > tol_trace)
      throw InvariantViolation("unit trace", "trace = " + format_complex(tr));
    min_eigenvalue_ = eig_hermitian(mat_).values.minCoeff();
    if (min_eigenvalue_ < tol_psd)
      throw InvariantViolation("positive semidefinite",
                               "minimum eigenvalue " + std::to_string(min_eigenvalue_));
  }

  int n_qubits() const noexcept { return n_qubits_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }
  const Matrix& matrix() const noexcept { return mat_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  Matrix mat_;
  int n_qubits_ = 0;
  double min_eigenvalue_ = 0.0;
};

inline DensityMatrix pure_state(const Eigen::VectorXcd& psi) {
  const Eigen::VectorXcd v = psi / psi.norm();
  return DensityMatrix(v * v.adjoint());
}

inline DensityMatrix maximally_mixed(int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

// ---------------------------------------------------------------------------
// Partial trace / transpose
// ---------------------------------------------------------------------------

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.n_qubits();
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  for (int q : kept)
    if (q < 0 || q >= n)
      throw IndexOutOfRange("partial_trace: qubit " + std::to_string(q) + " out of range for " +
                            std::to_string(n) + " qubits");

  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);

  auto gather = [n](Eigen::Index idx, const std::vector<int>& qubits) {
    Eigen::Index out = 0;
    for (int q : qubits) out = (out << 1) | ((idx >> (n - 1 - q)) & 1);
    return out;
  };

  const Eigen::Index dk = Eigen::Index{1} << kept.size();
  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const Eigen::Index ti = gather(i, traced);
    const Eigen::Index ki = gather(i, kept);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (gather(j, traced) == ti) out(ki, gather(j, kept)) += m(i, j);
  }
  return DensityMatrix(std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

/// Transpose of the 2x2 factor belonging to qubit `subsys`.
inline Matrix partial_transpose(const Matrix& m, int subsys) {
  const int n = qubits_for_dim(m.rows());
  if (m.rows() != m.cols() || n < 1) throw DimensionMismatch("partial_transpose: not an n-qubit matrix");
  if (subsys < 0 || subsys >= n)
    throw IndexOutOfRange("partial_transpose: qubit " + std::to_string(subsys) + " out of range for " +
                          std::to_string(n) + " qubits");
  const Eigen::Index bit = Eigen::Index{1} << (n - 1 - subsys);
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Eigen::Index ip = (i & ~bit) | (j & bit);
      const Eigen::Index jp = (j & ~bit) | (i & bit);
      out(ip, jp) = m(i, j);
    }
  return out;
}

inline Matrix partial_transpose(const DensityMatrix& rho, int subsys) {
  return partial_transpose(rho.matrix(), subsys);
}

}  // namespace scbell
