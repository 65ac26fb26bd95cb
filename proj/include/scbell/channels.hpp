// Single-qubit Kraus channels applied independently to every qubit, the
// transverse noise channel, closed-form violation curves for noisy Bell/GHZ
// states, time sweeps and threshold bisection.

#pragma once

#include "scbell/bell.hpp"
#include "scbell/entanglement.hpp"
#include "scbell/maximizer.hpp"
#include "scbell/qmat.hpp"
#include "scbell/sc_states.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace scbell {

inline constexpr double tol_completeness = 1e-12;

/// Operator-sum channel on one qubit with sum_i K_i^dagger K_i = I.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Matrix> operators) : ops_(std::move(operators)) {
    if (ops_.empty()) throw std::invalid_argument("KrausChannel needs at least one operator");
    Matrix sum = Matrix::Zero(2, 2);
    for (const auto& k : ops_) {
      if (k.rows() != 2 || k.cols() != 2) throw DimensionMismatch("Kraus operators must be 2x2");
      sum += k.adjoint() * k;
    }
    const double defect = max_abs(sum - identity(2));
    if (!(defect <= tol_completeness))
      throw InvariantViolation("completeness", "max |sum K^dagger K - I| = " + std::to_string(defect));
  }

  const std::vector<Matrix>& operators() const noexcept { return ops_; }

 private:
  std::vector<Matrix> ops_;
};

/// Decay rate and elapsed time; gamma = exp(-rate t / 2), omega = sqrt(1 - gamma^2).
struct NoiseParams {
  double gamma_rate = 1.0;
  double t = 0.0;

  void validate() const {
    if (!(gamma_rate > 0.0) || !std::isfinite(gamma_rate))
      throw InvariantViolation("gamma_rate > 0", "gamma_rate = " + std::to_string(gamma_rate));
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvariantViolation("t >= 0", "t = " + std::to_string(t));
  }
  double gamma() const { return std::exp(-gamma_rate * t / 2.0); }
  double omega() const { return std::sqrt(1.0 - gamma() * gamma()); }
};

/// gamma = exp(-x/2) for x = rate * t.
inline double gamma_of(double gamma_t) { return std::exp(-gamma_t / 2.0); }

/// K1 = [[gamma, 0], [0, 1]], K2 = [[0, 0], [omega, 0]]
inline KrausChannel transverse_channel_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvariantViolation("gamma in (0, 1]", "gamma = " + std::to_string(gamma));
  const double omega = std::sqrt(1.0 - gamma * gamma);
  Matrix k1(2, 2), k2(2, 2);
  k1 << gamma, 0, 0, 1;
  k2 << 0, 0, omega, 0;
  return KrausChannel({k1, k2});
}

inline KrausChannel transverse_channel(const NoiseParams& p) {
  p.validate();
  return transverse_channel_gamma(p.gamma());
}

/// sum over index tuples (i1..in) of (K_i1 x .. x K_in) rho (K_i1 x .. x K_in)^dagger
inline DensityMatrix apply_product_channel(const DensityMatrix& rho, const KrausChannel& ch) {
  const int n = rho.n_qubits();
  const auto& ops = ch.operators();
  const std::size_t m = ops.size();
  std::size_t tuples = 1;
  for (int q = 0; q < n; ++q) tuples *= m;

  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (std::size_t code = 0; code < tuples; ++code) {
    Matrix k = Matrix::Identity(1, 1);
    std::size_t c = code;
    for (int q = 0; q < n; ++q) {
      k = kron(k, ops[c % m]);
      c /= m;
    }
    out += k * rho.matrix() * k.adjoint();
  }
  out = 0.5 * (out + out.adjoint());
  return DensityMatrix(std::move(out));
}

// ---------------------------------------------------------------------------
// Noisy Bell / GHZ families
// ---------------------------------------------------------------------------

/// Transverse-noise output of the Bell state as SC2Diag parameters:
/// b = (g^4, g^2 w^2, g^2 w^2, 1 + w^4) / 2, c1 = g^2 / 2.
inline SC2DiagParams noisy_bell_params(double gamma) {
  const double g2 = gamma * gamma, w2 = 1.0 - g2;
  SC2DiagParams p;
  p.b = {0.5 * g2 * g2, 0.5 * g2 * w2, 0.5 * g2 * w2, 0.5 * (1.0 + w2 * w2)};
  p.c1 = 0.5 * g2;
  return p;
}

/// Transverse-noise output of the GHZ state as SC3Diag parameters.
inline SC3DiagParams noisy_ghz_params(double gamma) {
  const double g2 = gamma * gamma, w2 = 1.0 - g2;
  const double one = 0.5 * g2 * g2 * w2, two = 0.5 * g2 * w2 * w2;
  SC3DiagParams p;
  p.b = {0.5 * g2 * g2 * g2, one, one, one, two, two, two, 0.5 * (1.0 + w2 * w2 * w2)};
  p.c1 = 0.5 * g2 * gamma;
  return p;
}

/// 2 sqrt((2g^4 - 2g^2 + 1)^2 + g^4)
inline double fmax_noisy_bell_closed(double gamma) {
  const double g2 = gamma * gamma;
  const double z = 2.0 * g2 * g2 - 2.0 * g2 + 1.0;
  return 2.0 * std::sqrt(z * z + g2 * g2);
}

/// First branch 2(1 - g^6 - 3 g^2 w^4 + 3 g^4 w^2 + w^6).
inline double smax_noisy_ghz_parity_branch(double gamma) {
  const double g2 = gamma * gamma, w2 = 1.0 - g2;
  return 2.0 * (1.0 - g2 * g2 * g2 - 3.0 * g2 * w2 * w2 + 3.0 * g2 * g2 * w2 + w2 * w2 * w2);
}

/// Second branch 4 sqrt(2) g^3.
inline double smax_noisy_ghz_coherence_branch(double gamma) { return 4.0 * std::numbers::sqrt2 * gamma * gamma * gamma; }

/// Piecewise: parity branch for gamma <= 1/sqrt(2), coherence branch above.
inline double smax_noisy_ghz_closed(double gamma) {
  return gamma <= std::numbers::sqrt2 / 2.0 ? smax_noisy_ghz_parity_branch(gamma) : smax_noisy_ghz_coherence_branch(gamma);
}

/// Concurrence of the noisy Bell state: g^4
inline double concurrence_noisy_bell_closed(double gamma) { return std::pow(gamma, 4); }

// ---------------------------------------------------------------------------
// Sweeps and thresholds
// ---------------------------------------------------------------------------

struct SweepRecord {
  double gamma_t = 0.0;
  double gamma = 1.0;
  double closed_value = 0.0;
  double numeric_value = 0.0;
  /// Wootters concurrence for two-qubit sweeps, NaN for three-qubit sweeps.
  double measure_value = std::numeric_limits<double>::quiet_NaN();
};

/// Uniform grid of `steps` points over t in [0, t_max] applied to the Bell
/// (2 qubits) or GHZ (3 qubits) state.
inline std::vector<SweepRecord> run_sweep(const DensityMatrix& initial, double gamma_rate, double t_max, int steps,
                                          const MaximizerConfig& cfg) {
  if (steps < 2) throw std::invalid_argument("steps must be >= 2");
  if (!(gamma_rate > 0.0)) throw std::invalid_argument("gamma rate must be > 0");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("t_max must be > 0");
  const int n = initial.n_qubits();
  if (n != 2 && n != 3) throw DimensionMismatch("sweep supports 2-qubit (Bell) or 3-qubit (GHZ) initial states");
  const DensityMatrix expected = n == 2 ? bell_state() : ghz_state();
  if (max_abs(initial.matrix() - expected.matrix()) > 1e-12)
    throw std::invalid_argument("sweep initial state must be the Bell or GHZ state");

  std::vector<SweepRecord> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    const double t = t_max * k / (steps - 1);
    const NoiseParams noise{gamma_rate, t};
    const double gamma = noise.gamma();
    const DensityMatrix evolved = apply_product_channel(initial, transverse_channel(noise));
    SweepRecord r;
    r.gamma_t = gamma_rate * t;
    r.gamma = gamma;
    if (n == 2) {
      r.closed_value = fmax_noisy_bell_closed(gamma);
      r.numeric_value = maximize_chsh(evolved, cfg).value;
      r.measure_value = concurrence_wootters(evolved);
    } else {
      r.closed_value = smax_noisy_ghz_closed(gamma);
      r.numeric_value = maximize_svetlichny(evolved, cfg).value;
    }
    out.push_back(r);
  }
  return out;
}

/// Bisection for curve(x) = level on [lo, hi] to within 1e-8 in x.
template <class Curve>
double find_threshold(Curve&& curve, double level, double lo, double hi, double tolerance = 1e-8) {
  if (!(lo < hi)) throw std::invalid_argument("find_threshold: empty bracket");
  double flo = curve(lo) - level;
  const double fhi = curve(hi) - level;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw std::domain_error("find_threshold: no sign change in bracket");
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = curve(mid) - level;
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace scbell
