// Counter-based pseudo random numbers. Every value is a pure function of
// (seed, stream, counter), so independent streams never share state and
// results do not depend on evaluation order.

#pragma once

#include "scbell/qmat.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace scbell {

class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t below(std::uint64_t n) { return (*this)() % n; }

  /// Standard normal via Box-Muller; one value per call.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline Matrix random_ginibre(CounterRng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return g;
}

inline Matrix random_hermitian(CounterRng& rng, int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  const Matrix g = random_ginibre(rng, d, d);
  return 0.5 * (g + g.adjoint());
}

/// Random full-rank mixed state G G^dagger / Tr(G G^dagger).
inline DensityMatrix random_density_matrix(CounterRng& rng, int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  const Matrix g = random_ginibre(rng, d, d);
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint());
  return DensityMatrix(std::move(m));
}

}  // namespace scbell
