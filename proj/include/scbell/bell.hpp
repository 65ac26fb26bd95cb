// CHSH and Svetlichny Bell operators built from projective spin measurements
// a.sigma, their expectation values, the closed-form maxima for SC states, the
// measurement settings that attain them, and the Horodecki two-qubit maximum.

#pragma once

#include "scbell/qmat.hpp"
#include "scbell/sc_states.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace scbell {

inline constexpr double chsh_classical_bound = 2.0;
inline constexpr double svetlichny_classical_bound = 4.0;
inline const double tsirelson_chsh = 2.0 * std::numbers::sqrt2;
inline const double tsirelson_svetlichny = 4.0 * std::numbers::sqrt2;

using Vec3 = Eigen::Vector3d;

/// Unit Bloch vector (sin t cos p, sin t sin p, cos t), t in [0, pi], p in [0, 2 pi).
class MeasurementDirection {
 public:
  MeasurementDirection() = default;

  MeasurementDirection(double theta, double phi) : theta_(theta), phi_(phi) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
      throw InvariantViolation("theta in [0, pi]", "theta = " + std::to_string(theta));
    if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi))
      throw InvariantViolation("phi in [0, 2pi)", "phi = " + std::to_string(phi));
  }

  /// Direction of a nonzero vector; phi is 0 on the z axis.
  static MeasurementDirection from_vector(const Vec3& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("direction vector must be nonzero");
    const Vec3 u = v / norm;
    const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
    double phi = (u.x() == 0.0 && u.y() == 0.0) ? 0.0 : std::atan2(u.y(), u.x());
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    if (phi == 0.0) phi = 0.0;  // drop the sign of -0
    if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
    return {theta, phi};
  }

  /// Canonical direction for arbitrary real angles.
  static MeasurementDirection wrapped(double theta, double phi) { return from_vector(bloch(theta, phi)); }

  static Vec3 bloch(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }
  Vec3 vector() const { return bloch(theta_, phi_); }

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

inline MeasurementDirection axis_x() { return {std::numbers::pi / 2, 0.0}; }
inline MeasurementDirection axis_y() { return {std::numbers::pi / 2, std::numbers::pi / 2}; }
inline MeasurementDirection axis_z() { return {0.0, 0.0}; }
inline MeasurementDirection axis_minus_z() { return {std::numbers::pi, 0.0}; }

struct CHSHSettings {
  MeasurementDirection a, a_prime, b, b_prime;
};

struct SvetlichnySettings {
  MeasurementDirection a, a_prime, b, b_prime, c, c_prime;
};

/// a.sigma
inline Matrix observable(const MeasurementDirection& d) {
  const Vec3 v = d.vector();
  return v.x() * pauli_x() + v.y() * pauli_y() + v.z() * pauli_z();
}

/// F = AB + AB' + A'B - A'B'
inline Matrix chsh_operator(const CHSHSettings& s) {
  const Matrix A = observable(s.a), Ap = observable(s.a_prime);
  const Matrix B = observable(s.b), Bp = observable(s.b_prime);
  return kron(A, B) + kron(A, Bp) + kron(Ap, B) - kron(Ap, Bp);
}

/// S = ABC + ABC' + AB'C - AB'C' + A'BC - A'BC' - A'B'C - A'B'C'
inline Matrix svetlichny_operator(const SvetlichnySettings& s) {
  const Matrix A = observable(s.a), Ap = observable(s.a_prime);
  const Matrix B = observable(s.b), Bp = observable(s.b_prime);
  const Matrix C = observable(s.c), Cp = observable(s.c_prime);
  return kron({A, B, C}) + kron({A, B, Cp}) + kron({A, Bp, C}) - kron({A, Bp, Cp}) + kron({Ap, B, C}) -
         kron({Ap, B, Cp}) - kron({Ap, Bp, C}) - kron({Ap, Bp, Cp});
}

namespace detail {

inline double real_trace_product(const Matrix& rho, const Matrix& op) {
  // Tr(rho op) = sum_ij rho_ij op_ji
  const Complex t = (rho.array() * op.transpose().array()).sum();
  const double scale = std::max(1.0, max_abs(op));
  if (std::abs(t.imag()) > 1e-10 * scale)
    throw std::runtime_error("expectation value has imaginary part " + std::to_string(t.imag()));
  return t.real();
}

}  // namespace detail

inline double chsh_expectation(const DensityMatrix& rho, const CHSHSettings& s) {
  if (rho.n_qubits() != 2) throw DimensionMismatch("chsh_expectation needs a 2-qubit state");
  return detail::real_trace_product(rho.matrix(), chsh_operator(s));
}

inline double svetlichny_expectation(const DensityMatrix& rho, const SvetlichnySettings& s) {
  if (rho.n_qubits() != 3) throw DimensionMismatch("svetlichny_expectation needs a 3-qubit state");
  return detail::real_trace_product(rho.matrix(), svetlichny_operator(s));
}

// ---------------------------------------------------------------------------
// Closed-form maxima
// ---------------------------------------------------------------------------

/// 2 sqrt(1 + 4|a2|^2)
inline double fmax_sc2(const SC2Params& p) {
  validate(p);
  return 2.0 * std::sqrt(1.0 + 4.0 * std::norm(p.a2));
}

/// 2 sqrt((b1 + b4 - b2 - b3)^2 + 4|c1|^2), unclamped.
///
/// This is the optimum over settings with a = z, a' = x. When
/// (b1 + b4 - b2 - b3)^2 < 4|c1|^2 the true maximum over all settings is
/// larger (see fmax_horodecki).
inline double fmax_sc2_diag(const SC2DiagParams& p) {
  validate(p);
  const double z = p.b[0] + p.b[3] - p.b[1] - p.b[2];
  return 2.0 * std::sqrt(z * z + 4.0 * std::norm(p.c1));
}

/// max{4|1 - 2 a1|, 8 sqrt(2) |a2|}
inline double smax_sc3(const SC3Params& p) {
  validate(p);
  return std::max(4.0 * std::abs(1.0 - 2.0 * p.a1), 8.0 * std::numbers::sqrt2 * std::abs(p.a2));
}

/// Three-body z parity b1 - b2 - b3 - b4 + b5 + b6 + b7 - b8.
inline double sc3_diag_zzz(const SC3DiagParams& p) {
  const auto& b = p.b;
  return b[0] - b[1] - b[2] - b[3] + b[4] + b[5] + b[6] - b[7];
}

/// max{4|b1 - b2 - b3 - b4 + b5 + b6 + b7 - b8|, 8 sqrt(2) |c1|}
inline double smax_sc3_diag(const SC3DiagParams& p) {
  validate(p);
  return std::max(4.0 * std::abs(sc3_diag_zzz(p)), 8.0 * std::numbers::sqrt2 * std::abs(p.c1));
}

// ---------------------------------------------------------------------------
// Settings attaining the closed forms
// ---------------------------------------------------------------------------

/// a = z, a' = x, b/b' = (+-sin t cos p_d, +-sin t sin p_d, cos t) with
/// tan t = 2|a2| and p_d = -arg(a2). For a2 = 0 all four directions are z.
inline CHSHSettings optimal_chsh_settings(const SC2Params& p) {
  validate(p);
  if (p.a2 == Complex{}) return {axis_z(), axis_z(), axis_z(), axis_z()};
  const double t = std::atan(2.0 * std::abs(p.a2));
  const double phi_d = -std::arg(p.a2);
  const Vec3 d_xy{std::cos(phi_d), std::sin(phi_d), 0.0};
  const Vec3 z{0.0, 0.0, 1.0};
  const Vec3 b = std::sin(t) * d_xy + std::cos(t) * z;
  const Vec3 bp = -std::sin(t) * d_xy + std::cos(t) * z;
  return {axis_z(), axis_x(), MeasurementDirection::from_vector(b), MeasurementDirection::from_vector(bp)};
}

/// z branch when 4|1 - 2a1| > 8 sqrt(2)|a2|: a, a', b, b' along z, c = sign(2a1 - 1) z,
/// c' = -c. Otherwise every direction lies in the x-y plane with
/// p_a + p_d + p_c = -arg(a2), p_a' = p_a + pi/2, p_d' = p_d - pi/2,
/// p_c' = p_c + pi/2 and b, b' = (d +- d')/sqrt(2).
inline SvetlichnySettings optimal_svetlichny_settings(const SC3Params& p) {
  validate(p);
  const double z_branch = 4.0 * std::abs(1.0 - 2.0 * p.a1);
  const double plane_branch = 8.0 * std::numbers::sqrt2 * std::abs(p.a2);
  if (z_branch > plane_branch) {
    const MeasurementDirection c = (2.0 * p.a1 - 1.0) >= 0.0 ? axis_z() : axis_minus_z();
    const MeasurementDirection cp = (2.0 * p.a1 - 1.0) >= 0.0 ? axis_minus_z() : axis_z();
    return {axis_z(), axis_z(), axis_z(), axis_z(), c, cp};
  }
  constexpr double half_pi = std::numbers::pi / 2;
  const double alpha = std::arg(p.a2);
  const double phi_a = 0.0, phi_d = 0.0;
  const double phi_c = -alpha;
  auto in_plane = [](double phi) { return MeasurementDirection::wrapped(half_pi, phi); };
  const Vec3 d = MeasurementDirection::bloch(half_pi, phi_d);
  const Vec3 dp = MeasurementDirection::bloch(half_pi, phi_d - half_pi);
  const Vec3 b = (d + dp) / std::numbers::sqrt2;
  const Vec3 bp = (d - dp) / std::numbers::sqrt2;
  return {in_plane(phi_a),
          in_plane(phi_a + half_pi),
          MeasurementDirection::from_vector(b),
          MeasurementDirection::from_vector(bp),
          in_plane(phi_c),
          in_plane(phi_c + half_pi)};
}

// ---------------------------------------------------------------------------
// Correlation tensors
// ---------------------------------------------------------------------------

inline const std::array<Matrix, 3>& paulis() {
  static const std::array<Matrix, 3> p{pauli_x(), pauli_y(), pauli_z()};
  return p;
}

/// T_ij = Tr(rho sigma_i (x) sigma_j)
inline Eigen::Matrix3d correlation_matrix(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw DimensionMismatch("correlation_matrix needs a 2-qubit state");
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      t(i, j) = detail::real_trace_product(rho.matrix(), kron(paulis()[i], paulis()[j]));
  return t;
}

/// T_ijk = Tr(rho sigma_i (x) sigma_j (x) sigma_k)
struct CorrelationTensor3 {
  std::array<Eigen::Matrix3d, 3> slices;  // slices[k](i, j) = T_ijk

  /// sum_ijk u_i v_j w_k T_ijk
  double contract(const Vec3& u, const Vec3& v, const Vec3& w) const {
    const Eigen::Matrix3d m = w.x() * slices[0] + w.y() * slices[1] + w.z() * slices[2];
    return u.dot(m * v);
  }
};

inline CorrelationTensor3 correlation_tensor(const DensityMatrix& rho) {
  if (rho.n_qubits() != 3) throw DimensionMismatch("correlation_tensor needs a 3-qubit state");
  CorrelationTensor3 t;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        t.slices[k](i, j) = detail::real_trace_product(rho.matrix(), kron({paulis()[i], paulis()[j], paulis()[k]}));
  return t;
}

/// Maximum CHSH value of any two-qubit state: 2 sqrt(t1 + t2) with t1, t2 the
/// two largest eigenvalues of T^T T.
inline double fmax_horodecki(const DensityMatrix& rho) {
  const Eigen::Matrix3d t = correlation_matrix(rho);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(t.transpose() * t, Eigen::EigenvaluesOnly);
  const Eigen::Vector3d ev = solver.eigenvalues();  // ascending
  return 2.0 * std::sqrt(std::max(0.0, ev(1) + ev(2)));
}

/// Vectors d, d' with b + b' = 2 d cos(t), b - b' = 2 d' sin(t). Either is
/// the zero vector when b = -b' or b = b' respectively.
struct SplitDirections {
  Vec3 d, d_prime;
  double angle;  // t
};

inline SplitDirections split_directions(const MeasurementDirection& b, const MeasurementDirection& b_prime) {
  const Vec3 sum = b.vector() + b_prime.vector();
  const Vec3 diff = b.vector() - b_prime.vector();
  const double t = std::atan2(diff.norm(), sum.norm());
  SplitDirections out{Vec3::Zero(), Vec3::Zero(), t};
  if (sum.norm() > 1e-12) out.d = sum.normalized();
  if (diff.norm() > 1e-12) out.d_prime = diff.normalized();
  return out;
}

}  // namespace scbell
