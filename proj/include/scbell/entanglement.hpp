// Entanglement and information measures, in bits.

#pragma once

#include "scbell/bell.hpp"
#include "scbell/qmat.hpp"
#include "scbell/sc_states.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <limits>
#include <numbers>
#include <string_view>
#include <vector>

namespace scbell {

enum class MeasureMethod { closed_form, direct };

inline std::string_view to_string(MeasureMethod m) {
  return m == MeasureMethod::closed_form ? "closed_form" : "direct";
}

struct MeasureResult {
  double value = 0.0;
  MeasureMethod method = MeasureMethod::direct;
};

namespace detail {

/// x log2 x with 0 log 0 = 0.
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace detail

/// -Tr(rho log2 rho)
inline double von_neumann_entropy(const DensityMatrix& rho) {
  const RealVector ev = eig_hermitian(rho.matrix()).values;
  double s = 0.0;
  for (double v : ev)
    if (v > log_cutoff) s -= v * std::log2(v);
  return std::max(0.0, s);
}

/// Wootters concurrence max(0, l1 - l2 - l3 - l4). With rho = X X^dagger,
/// the l_i (square roots of the eigenvalues of sqrt(rho) rho~ sqrt(rho),
/// rho~ = (sy x sy) rho* (sy x sy)) are the singular values of
/// X^T (sy x sy) X, which keeps small l_i at full absolute precision.
inline double concurrence_wootters(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw DimensionMismatch("concurrence_wootters needs a 2-qubit state");
  constexpr double noise_floor = 1e-14;
  const EigenSystem es = eig_hermitian(rho.matrix());
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = 0; k < es.values.size(); ++k)
    if (es.values(k) > noise_floor) support.push_back(k);
  Matrix x(4, static_cast<Eigen::Index>(support.size()));
  for (std::size_t c = 0; c < support.size(); ++c)
    x.col(static_cast<Eigen::Index>(c)) = std::sqrt(es.values(support[c])) * es.vectors.col(support[c]);

  const Matrix tau = x.transpose() * kron(pauli_y(), pauli_y()) * x;
  const RealVector sv = Eigen::JacobiSVD<Matrix>(tau).singularValues();  // descending
  std::array<double, 4> l{};
  for (Eigen::Index k = 0; k < sv.size(); ++k) l[static_cast<std::size_t>(k)] = sv(k);
  return std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
}

/// 2|a2|
inline double concurrence_sc2(const SC2Params& p) {
  validate(p);
  return 2.0 * std::abs(p.a2);
}

/// sqrt(6)|a2|
inline double gen_concurrence_sc3(const SC3Params& p) {
  validate(p);
  return std::sqrt(6.0) * std::abs(p.a2);
}

/// 2 sqrt(1 + C^2)
inline double fmax_from_concurrence(double c) { return 2.0 * std::sqrt(1.0 + c * c); }

/// Tr(rho log2 rho) - Tr(rho log2 sigma); +infinity when rho has weight above
/// 1e-10 outside the support of sigma.
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("relative_entropy: dimension mismatch");
  const EigenSystem es = eig_hermitian(sigma.matrix());
  double outside = 0.0;
  for (Eigen::Index k = 0; k < es.values.size(); ++k)
    if (es.values(k) <= log_cutoff) {
      const auto v = es.vectors.col(k);
      outside += (v.adjoint() * rho.matrix() * v)(0, 0).real();
    }
  if (outside > 1e-10) return std::numeric_limits<double>::infinity();

  const double self = -von_neumann_entropy(rho);
  const RealVector logs = es.values.unaryExpr([](double v) { return v > log_cutoff ? std::log2(v) : 0.0; });
  const double cross = (rho.matrix() * from_spectrum(es, logs)).trace().real();
  const double value = self - cross;
  return value < 0.0 && value > -1e-12 ? 0.0 : value;
}

/// a1|000><000| + a4|111><111|, the closest fully separable state to the
/// three-qubit SC state.
inline DensityMatrix ree_sc3_reference(const SC3Params& p) { return build_sc3({p.a1, p.a4, Complex{}}); }

/// S(rho || a1|000><000| + a4|111><111|) for the three-qubit SC state rho
inline double ree_sc3_direct(const SC3Params& p) {
  return relative_entropy(build_sc3(p), ree_sc3_reference(p));
}

enum class ReeFormula {
  /// Literal transcription: f(a1, a4, a2, a2*) - f(a1 log a1, a4 log a4, a2 log a4, a2* log a1).
  /// The second call's arguments have non-positive eigenvalues, so the result
  /// is NaN except in degenerate cases.
  printed,
  /// f(a1, a4, a2, a2*) - (a1 log a1 + a4 log a4), which equals the direct value.
  corrected,
};

/// f(x1, x2, x3, x4) = f+ log2 f+ + f- log2 f-,
/// f+- = [(x1 + x2) +- sqrt((x1 - x2)^2 + 4 x3 x4)] / 2.
/// x3 x4 is real for the conjugate pairs used here. Negative f+- give NaN.
inline double ree_f(double x1, double x2, Complex x3, Complex x4) {
  const double disc = (x1 - x2) * (x1 - x2) + 4.0 * (x3 * x4).real();
  const double root = std::sqrt(std::max(0.0, disc));
  const double fp = 0.5 * ((x1 + x2) + root);
  const double fm = 0.5 * ((x1 + x2) - root);
  auto term = [](double x) {
    if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
    return detail::xlog2x(x);
  };
  return term(fp) + term(fm);
}

/// g(x1, x2, x3) = f(x1, x2, sqrt(x3/128), sqrt(x3/128)): the same
/// eigenvalue expression with 4 x3 x4 replaced by x3 / 32.
inline double ree_g(double x1, double x2, double x3) {
  const double half = std::sqrt(std::max(0.0, x3) / 128.0);
  return ree_f(x1, x2, half, half);
}

inline double ree_sc3_closed(const SC3Params& p, ReeFormula mode = ReeFormula::corrected) {
  validate(p);
  const double first = ree_f(p.a1, p.a4, p.a2, std::conj(p.a2));
  if (mode == ReeFormula::corrected) {
    const double value = first - (detail::xlog2x(p.a1) + detail::xlog2x(p.a4));
    return value < 0.0 && value > -1e-12 ? 0.0 : value;
  }
  const double la1 = p.a1 > 0.0 ? std::log2(p.a1) : -std::numeric_limits<double>::infinity();
  const double la4 = p.a4 > 0.0 ? std::log2(p.a4) : -std::numeric_limits<double>::infinity();
  return first - ree_f(detail::xlog2x(p.a1), detail::xlog2x(p.a4), p.a2 * la4, std::conj(p.a2) * la1);
}

/// Relative entropy of entanglement of the three-qubit SC state recovered
/// from a measured in-plane Svetlichny maximum (S_max^2 = 128 |a2|^2); corrected form.
inline double ree_sc3_from_smax(double a1, double a4, double smax) {
  return ree_g(a1, a4, smax * smax) - (detail::xlog2x(a1) + detail::xlog2x(a4));
}

/// log2 d_A + S(rho_A) - S(rho) for a two-qubit state shared as A|B.
inline double dense_coding_capacity(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw DimensionMismatch("dense_coding_capacity needs a 2-qubit state");
  const DensityMatrix reduced = partial_trace(rho, {0});
  return 1.0 + von_neumann_entropy(reduced) - von_neumann_entropy(rho);
}

enum class MeasureKind { concurrence, gen_concurrence, ree, chi };

inline MeasureKind parse_measure_kind(std::string_view s) {
  if (s == "concurrence") return MeasureKind::concurrence;
  if (s == "gen_concurrence") return MeasureKind::gen_concurrence;
  if (s == "ree") return MeasureKind::ree;
  if (s == "chi") return MeasureKind::chi;
  throw std::invalid_argument("unknown measure '" + std::string(s) + "'");
}

inline std::string_view to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::concurrence: return "concurrence";
    case MeasureKind::gen_concurrence: return "gen_concurrence";
    case MeasureKind::ree: return "ree";
    case MeasureKind::chi: return "chi";
  }
  return "?";
}

/// Evaluates a measure on a state specification. Concurrence and capacity
/// need two qubits; the generalized concurrence and REE are defined for the
/// three-qubit Schmidt family (sc3 or ghz) only.
inline MeasureResult measure(MeasureKind kind, const StateSpec& spec) {
  switch (kind) {
    case MeasureKind::concurrence:
      if (spec.n_qubits() != 2) throw DimensionMismatch("concurrence needs a 2-qubit state");
      return {concurrence_wootters(build_state(spec)), MeasureMethod::direct};
    case MeasureKind::chi:
      if (spec.n_qubits() != 2) throw DimensionMismatch("chi needs a 2-qubit state");
      return {dense_coding_capacity(build_state(spec)), MeasureMethod::direct};
    case MeasureKind::gen_concurrence:
    case MeasureKind::ree: {
      const auto* p = std::get_if<SC3Params>(&spec.params);
      if (p == nullptr)
        throw std::invalid_argument(std::string(to_string(kind)) + " is defined for sc3/ghz states only");
      if (kind == MeasureKind::gen_concurrence) return {gen_concurrence_sc3(*p), MeasureMethod::closed_form};
      return {ree_sc3_direct(*p), MeasureMethod::direct};
    }
  }
  throw std::logic_error("unreachable measure kind");
}

}  // namespace scbell
