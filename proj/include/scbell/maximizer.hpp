// Multistart derivative-free maximization of CHSH and Svetlichny values over
// measurement angles: jittered starts spread over seeded samples of a coarse
// angle lattice, each refined by restarted Nelder-Mead simplex searches.

#pragma once

#include "scbell/bell.hpp"
#include "scbell/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace scbell {

struct MaximizerConfig {
  int coarse_grid_points_per_angle = 8;
  /// Lattice points sampled for the coarse stage (the full lattice has
  /// points^angles entries, which is too large to enumerate).
  int coarse_samples = 4096;
  int restarts = 32;
  int refine_iterations = 400;
  std::uint64_t seed = 0;
  /// Convergence threshold on the spread of simplex values.
  double tolerance = 1e-10;

  void validate() const {
    if (coarse_grid_points_per_angle < 1 || coarse_samples < 1 || restarts < 1 || refine_iterations < 1)
      throw std::invalid_argument("MaximizerConfig: all counts must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("MaximizerConfig: tolerance must be positive");
  }
};

template <std::size_t N>
using AngleVector = std::array<double, N>;

template <std::size_t N>
struct SimplexResult {
  AngleVector<N> x{};
  double value = -std::numeric_limits<double>::infinity();
  int iterations = 0;
};

namespace detail {

/// Nelder-Mead maximization from `x0` with an axis-aligned initial simplex.
template <std::size_t N, class F>
SimplexResult<N> nelder_mead_max(F&& f, const AngleVector<N>& x0, double step, int max_iterations,
                                 double tolerance) {
  constexpr double reflect = 1.0, expand = 2.0, contract = 0.5, shrink = 0.5;
  std::array<AngleVector<N>, N + 1> pts;
  std::array<double, N + 1> vals;
  pts[0] = x0;
  for (std::size_t i = 0; i < N; ++i) {
    pts[i + 1] = x0;
    pts[i + 1][i] += step;
  }
  for (std::size_t i = 0; i <= N; ++i) vals[i] = f(pts[i]);

  std::array<std::size_t, N + 1> order;
  int it = 0;
  for (; it < max_iterations; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    const std::size_t best = order[0], worst = order[N], second_worst = order[N - 1];
    if (vals[best] - vals[worst] <= tolerance) break;

    AngleVector<N> centroid{};
    for (std::size_t k = 0; k < N; ++k) {
      const auto& p = pts[order[k]];
      for (std::size_t i = 0; i < N; ++i) centroid[i] += p[i] / static_cast<double>(N);
    }
    auto along = [&](double coef) {
      AngleVector<N> y;
      for (std::size_t i = 0; i < N; ++i) y[i] = centroid[i] + coef * (pts[worst][i] - centroid[i]);
      return y;
    };

    const AngleVector<N> xr = along(-reflect);
    const double fr = f(xr);
    if (fr > vals[best]) {
      const AngleVector<N> xe = along(-expand);
      const double fe = f(xe);
      if (fe > fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr > vals[second_worst]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr > vals[worst];
    const AngleVector<N> xc = along(outside ? -contract : contract);
    const double fc = f(xc);
    if (fc > std::max(fr, vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= N; ++k) {
      auto& p = pts[order[k]];
      for (std::size_t i = 0; i < N; ++i) p[i] = pts[best][i] + shrink * (p[i] - pts[best][i]);
      vals[order[k]] = f(p);
    }
  }
  const std::size_t best = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
  return {pts[best], vals[best], it};
}

/// Coarse lattice angle k of G for a polar (theta) or azimuthal (phi) slot.
inline double lattice_angle(int k, int points, bool polar) {
  if (polar) return (k + 0.5) * std::numbers::pi / points;
  return 2.0 * std::numbers::pi * k / points;
}

/// Maximizes f over N angles laid out as (theta, phi) pairs.
template <std::size_t N, class F>
SimplexResult<N> multistart_maximize(F&& f, const MaximizerConfig& cfg) {
  static_assert(N % 2 == 0, "angles come in (theta, phi) pairs");
  cfg.validate();
  const int g = cfg.coarse_grid_points_per_angle;

  struct Candidate {
    AngleVector<N> x;
    double value;
  };
  std::vector<Candidate> pool;
  pool.reserve(static_cast<std::size_t>(cfg.coarse_samples));
  CounterRng lattice(cfg.seed, 0);
  for (int s = 0; s < cfg.coarse_samples; ++s) {
    AngleVector<N> x;
    for (std::size_t i = 0; i < N; ++i)
      x[i] = lattice_angle(static_cast<int>(lattice.below(static_cast<std::uint64_t>(g))), g, i % 2 == 0);
    pool.push_back({x, f(x)});
  }
  // One jittered start per pool slice plus the best lattice point. Ranking
  // starts by value biases them toward basins that are wide on the lattice
  // but locally suboptimal, so every start is refined.
  const std::size_t slices = std::min(pool.size(), static_cast<std::size_t>(cfg.restarts));
  const double cell = std::numbers::pi / g;
  const int coarse_iterations = std::max(1, cfg.refine_iterations / 4);
  std::vector<AngleVector<N>> seeds;
  seeds.reserve(slices + 1);
  for (std::size_t k = 0; k < slices; ++k) {
    AngleVector<N> x = pool[k * pool.size() / slices].x;
    CounterRng stream(cfg.seed, static_cast<std::uint64_t>(k) + 1);
    for (auto& xi : x) xi += stream.uniform(-0.5, 0.5) * cell;
    seeds.push_back(x);
  }
  seeds.push_back(std::max_element(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
                    return a.value < b.value;
                  })->x);

  SimplexResult<N> best;
  for (const auto& seed : seeds) {
    SimplexResult<N> cur = nelder_mead_max<N>(f, seed, 0.5 * cell, coarse_iterations, cfg.tolerance);
    double step = 0.25 * cell;
    for (int round = 0; round < 8; ++round) {
      SimplexResult<N> next = nelder_mead_max<N>(f, cur.x, step, cfg.refine_iterations, cfg.tolerance);
      const double gain = next.value - cur.value;
      next.iterations += cur.iterations;
      if (next.value >= cur.value) cur = next;
      if (round > 0 && gain <= cfg.tolerance) break;
      step = std::max(0.25 * step, 1e-4);
    }
    if (cur.value > best.value) best = cur;
  }
  return best;
}

}  // namespace detail

struct CHSHMaximum {
  double value = 0.0;
  CHSHSettings settings;
};

struct SvetlichnyMaximum {
  double value = 0.0;
  SvetlichnySettings settings;
};

/// Numerical maximum of Tr(rho F) over all four measurement directions.
inline CHSHMaximum maximize_chsh(const DensityMatrix& rho, const MaximizerConfig& cfg = {}) {
  if (rho.n_qubits() != 2) throw DimensionMismatch("maximize_chsh needs a 2-qubit state");
  const Eigen::Matrix3d t = correlation_matrix(rho);
  auto objective = [&t](const AngleVector<8>& x) {
    const Vec3 a = MeasurementDirection::bloch(x[0], x[1]);
    const Vec3 ap = MeasurementDirection::bloch(x[2], x[3]);
    const Vec3 b = MeasurementDirection::bloch(x[4], x[5]);
    const Vec3 bp = MeasurementDirection::bloch(x[6], x[7]);
    return a.dot(t * (b + bp)) + ap.dot(t * (b - bp));
  };
  const auto best = detail::multistart_maximize<8>(objective, cfg);
  const auto& x = best.x;
  CHSHSettings s{MeasurementDirection::wrapped(x[0], x[1]), MeasurementDirection::wrapped(x[2], x[3]),
                 MeasurementDirection::wrapped(x[4], x[5]), MeasurementDirection::wrapped(x[6], x[7])};
  return {chsh_expectation(rho, s), s};
}

/// Numerical maximum of Tr(rho S) over all six measurement directions.
inline SvetlichnyMaximum maximize_svetlichny(const DensityMatrix& rho, const MaximizerConfig& cfg = {}) {
  if (rho.n_qubits() != 3) throw DimensionMismatch("maximize_svetlichny needs a 3-qubit state");
  const CorrelationTensor3 t = correlation_tensor(rho);
  auto objective = [&t](const AngleVector<12>& x) {
    const Vec3 a = MeasurementDirection::bloch(x[0], x[1]);
    const Vec3 ap = MeasurementDirection::bloch(x[2], x[3]);
    const Vec3 b = MeasurementDirection::bloch(x[4], x[5]);
    const Vec3 bp = MeasurementDirection::bloch(x[6], x[7]);
    const Vec3 c = MeasurementDirection::bloch(x[8], x[9]);
    const Vec3 cp = MeasurementDirection::bloch(x[10], x[11]);
    // S = A(B+B')C + A(B-B')C' + A'(B-B')C - A'(B+B')C'
    return t.contract(a, b + bp, c) + t.contract(a, b - bp, cp) + t.contract(ap, b - bp, c) -
           t.contract(ap, b + bp, cp);
  };
  const auto best = detail::multistart_maximize<12>(objective, cfg);
  const auto& x = best.x;
  SvetlichnySettings s{MeasurementDirection::wrapped(x[0], x[1]),  MeasurementDirection::wrapped(x[2], x[3]),
                       MeasurementDirection::wrapped(x[4], x[5]),  MeasurementDirection::wrapped(x[6], x[7]),
                       MeasurementDirection::wrapped(x[8], x[9]),  MeasurementDirection::wrapped(x[10], x[11])};
  return {svetlichny_expectation(rho, s), s};
}

}  // namespace scbell
