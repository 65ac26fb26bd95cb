// Seeded property suites cross-checking closed forms against independent
// computations. Each property counts passing cases and records the worst
// deviation seen.

#pragma once

#include "scbell/bell.hpp"
#include "scbell/channels.hpp"
#include "scbell/entanglement.hpp"
#include "scbell/maximizer.hpp"
#include "scbell/random.hpp"
#include "scbell/sc_states.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace scbell {

struct PropertyResult {
  std::string name;
  int passed = 0;
  int total = 0;
  double worst = 0.0;      // largest deviation observed (0 for boolean checks)
  double tolerance = 0.0;

  bool ok() const { return total > 0 && passed == total; }

  /// Records one case; a NaN deviation fails.
  void check(double deviation) {
    ++total;
    if (std::isnan(deviation)) {
      worst = deviation;
      return;
    }
    if (!std::isnan(worst)) worst = std::max(worst, deviation);
    if (deviation <= tolerance) ++passed;
  }
  void check(bool pass) {
    ++total;
    if (pass) ++passed;
  }
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyResult> properties;

  bool ok() const {
    return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.ok(); });
  }
};

enum class Suite { all, chsh, svetlichny, measures, channels };

inline Suite parse_suite(std::string_view s) {
  if (s == "all") return Suite::all;
  if (s == "chsh") return Suite::chsh;
  if (s == "svetlichny") return Suite::svetlichny;
  if (s == "measures") return Suite::measures;
  if (s == "channels") return Suite::channels;
  throw std::invalid_argument("unknown suite '" + std::string(s) + "'");
}

namespace detail {

inline PropertyResult property(std::string name, double tolerance) {
  PropertyResult p;
  p.name = std::move(name);
  p.tolerance = tolerance;
  return p;
}

inline MaximizerConfig seeded(const MaximizerConfig& base, std::uint64_t seed) {
  MaximizerConfig c = base;
  c.seed = seed;
  return c;
}

/// a1 on a uniform grid of `n` points in [0, 1]; |a2| = r sqrt(a1 a4) with r on
/// a uniform grid in [0, 1]; a2 real.
template <class Visit>
void schmidt_grid(int n, Visit&& visit) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a1 = static_cast<double>(i) / (n - 1);
      const double a4 = 1.0 - a1;
      const double r = static_cast<double>(j) / (n - 1);
      visit(a1, a4, r * std::sqrt(a1 * a4));
    }
}

}  // namespace detail

inline SuiteReport verify_chsh(int samples, std::uint64_t seed, const MaximizerConfig& base = {}) {
  auto closed_numeric = detail::property("closed form vs multistart maximum", 1e-5);
  auto closed_horodecki = detail::property("closed form vs Horodecki maximum", 1e-10);
  auto optimal = detail::property("optimal settings attain closed form", 1e-9);
  auto ortho = detail::property("d.d' = 0 for maximizer settings", 1e-9);
  auto phase = detail::property("phase invariance of closed form", 1e-12);
  auto separable = detail::property("separable states obey CHSH bound", 1e-6);
  auto lemma = detail::property("x cos t + y sin t <= sqrt(x^2 + y^2), tight at atan2(y, x)", 1e-12);

  CounterRng rng(seed, 101);
  for (int i = 0; i < samples; ++i) {
    const SC2Params p = random_sc2_params(rng);
    const DensityMatrix rho = build_sc2(p);
    const double closed = fmax_sc2(p);
    const CHSHMaximum m = maximize_chsh(rho, detail::seeded(base, seed + static_cast<std::uint64_t>(i)));
    closed_numeric.check(std::abs(m.value - closed));
    closed_horodecki.check(std::abs(fmax_horodecki(rho) - closed));
    optimal.check(std::abs(chsh_expectation(rho, optimal_chsh_settings(p)) - closed));
    const SplitDirections sd = split_directions(m.settings.b, m.settings.b_prime);
    ortho.check(std::abs(sd.d.dot(sd.d_prime)));
    const double chi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    phase.check(std::abs(fmax_sc2({p.a1, p.a4, p.a2 * std::polar(1.0, chi)}) - closed));

    const SC2Params sep{p.a1, p.a4, Complex{}};
    const CHSHMaximum ms = maximize_chsh(build_sc2(sep), detail::seeded(base, seed + static_cast<std::uint64_t>(i)));
    separable.check(std::max(0.0, ms.value - chsh_classical_bound));
  }
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform(-1.0, 1.0), y = rng.uniform(-1.0, 1.0), t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double bound = std::hypot(x, y);
    const double at = std::atan2(y, x);
    lemma.check(std::max(0.0, x * std::cos(t) + y * std::sin(t) - bound) +
                std::abs(x * std::cos(at) + y * std::sin(at) - bound));
  }
  return {"chsh", {closed_numeric, closed_horodecki, optimal, ortho, phase, separable, lemma}};
}

inline SuiteReport verify_svetlichny(int samples, std::uint64_t seed, const MaximizerConfig& base = {}) {
  auto closed_numeric = detail::property("Schmidt closed form vs multistart maximum", 1e-4);
  auto diag_numeric = detail::property("diagonal closed form vs multistart maximum", 1e-4);
  auto optimal = detail::property("optimal settings attain closed form", 1e-9);
  auto phase = detail::property("phase invariance of closed form", 1e-12);
  auto lemma = detail::property("x cos^2 t + y sin^2 t <= max(x, y), tight at 0 or pi/2", 1e-12);

  CounterRng rng(seed, 202);
  for (int i = 0; i < samples; ++i) {
    const SC3Params p = random_sc3_params(rng);
    const DensityMatrix rho = build_sc3(p);
    const double closed = smax_sc3(p);
    closed_numeric.check(
        std::abs(maximize_svetlichny(rho, detail::seeded(base, seed + static_cast<std::uint64_t>(i))).value - closed));
    optimal.check(std::abs(svetlichny_expectation(rho, optimal_svetlichny_settings(p)) - closed));
    const double chi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    phase.check(std::abs(smax_sc3({p.a1, p.a4, p.a2 * std::polar(1.0, chi)}) - closed));

    const SC3DiagParams q = random_sc3_diag_params(rng);
    diag_numeric.check(std::abs(
        maximize_svetlichny(build_sc3_diag(q), detail::seeded(base, seed + static_cast<std::uint64_t>(i))).value -
        smax_sc3_diag(q)));
  }
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform(0.0, 1.0), y = rng.uniform(0.0, 1.0), t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double c2 = std::cos(t) * std::cos(t), s2 = std::sin(t) * std::sin(t);
    const double bound = std::max(x, y);
    auto form = [&](double angle) {
      return x * std::cos(angle) * std::cos(angle) + y * std::sin(angle) * std::sin(angle);
    };
    const double tight = std::max(form(0.0), form(std::numbers::pi / 2));
    lemma.check(std::max(0.0, x * c2 + y * s2 - bound) + std::abs(tight - bound));
  }
  return {"svetlichny", {closed_numeric, diag_numeric, optimal, phase, lemma}};
}

inline SuiteReport verify_measures(int samples, std::uint64_t seed) {
  auto eq9 = detail::property("F_max = 2 sqrt(1 + C^2) on 50x50 grid", 1e-12);
  auto wootters = detail::property("Wootters concurrence = 2|a2| on 50x50 grid", 1e-9);
  auto smax_identity = detail::property("S_max = 8 C / sqrt(3) on in-plane branch", 1e-12);
  auto chain = detail::property("a2 != 0 <=> C > 0 <=> F_max > 2 <=> chi > 1 on 50x50 grid", 0.0);
  auto chi_monotone = detail::property("chi strictly increasing in |a2|", 0.0);
  auto re_nonneg = detail::property("relative entropy >= 0, zero iff equal", 1e-9);
  auto ree = detail::property("REE closed (corrected) vs direct", 1e-9);

  detail::schmidt_grid(50, [&](double a1, double a4, double mod) {
    const SC2Params p{a1, a4, Complex(mod, 0.0)};
    const DensityMatrix rho = build_sc2(p);
    eq9.check(std::abs(fmax_sc2(p) - fmax_from_concurrence(concurrence_sc2(p))));
    const double c = concurrence_wootters(rho);
    wootters.check(std::abs(c - 2.0 * mod));
    const bool entangled = mod != 0.0;
    const bool pos_c = c > 1e-12;
    const bool violates = fmax_sc2(p) > chsh_classical_bound;
    const bool useful = dense_coding_capacity(rho) > 1.0 + 1e-12;
    chain.check(entangled == pos_c && pos_c == violates && violates == useful);

    const SC3Params q{a1, a4, Complex(mod, 0.0)};
    if (8.0 * std::numbers::sqrt2 * mod >= 4.0 * std::abs(1.0 - 2.0 * a1))
      smax_identity.check(std::abs(smax_sc3(q) - 8.0 * gen_concurrence_sc3(q) / std::sqrt(3.0)));
  });

  for (int i = 1; i < 20; ++i) {
    const double a1 = i / 20.0, a4 = 1.0 - a1, top = std::sqrt(a1 * a4);
    double previous = dense_coding_capacity(build_sc2({a1, a4, Complex{}}));
    for (int j = 1; j <= 20; ++j) {
      const double chi = dense_coding_capacity(build_sc2({a1, a4, Complex(top * j / 20.0, 0.0)}));
      chi_monotone.check(chi > previous);
      previous = chi;
    }
  }

  CounterRng rng(seed, 303);
  for (int i = 0; i < samples; ++i) {
    const int n = 1 + static_cast<int>(rng.below(3));
    const DensityMatrix rho = random_density_matrix(rng, n);
    const DensityMatrix sigma = random_density_matrix(rng, n);
    const double d = relative_entropy(rho, sigma);
    const double self = relative_entropy(rho, rho);
    // distinct random full-rank states are never close, so S > 0 is required
    re_nonneg.check((d > 1e-9 ? 0.0 : 1.0) + std::abs(self));

    const SC3Params p = random_sc3_params(rng);
    ree.check(std::abs(ree_sc3_closed(p, ReeFormula::corrected) - ree_sc3_direct(p)));
  }
  return {"measures", {eq9, wootters, smax_identity, chain, chi_monotone, re_nonneg, ree}};
}

inline SuiteReport verify_channels(int samples, std::uint64_t seed) {
  auto trace = detail::property("trace preserved by product channel", 1e-12);
  auto structure = detail::property("noisy Bell/GHZ stay in the diagonal families", 1e-12);
  auto concurrence = detail::property("Wootters concurrence of noisy Bell = gamma^4", 1e-9);
  auto consistency = detail::property("noisy Bell curve = diagonal closed form", 1e-12);
  auto piecewise = detail::property("piecewise noisy GHZ curve = diagonal closed form", 1e-12);
  auto continuity = detail::property("noisy GHZ branches agree at gamma = 1/sqrt(2)", 1e-12);
  auto witness = detail::property("interior local minimum of both noisy curves", 0.0);

  CounterRng rng(seed, 404);
  for (int i = 0; i < samples; ++i) {
    const int n = 1 + static_cast<int>(rng.below(3));
    const DensityMatrix rho = random_density_matrix(rng, n);
    const DensityMatrix out = apply_product_channel(rho, transverse_channel_gamma(rng.uniform(0.01, 1.0)));
    trace.check(std::abs(out.matrix().trace() - Complex(1.0, 0.0)));
  }

  const DensityMatrix bell = bell_state(), ghz = ghz_state();
  std::vector<double> f3, s6;
  for (int k = 0; k <= 300; ++k) {
    const double gt = 3.0 * k / 300.0;
    const double g = gamma_of(gt);
    const KrausChannel ch = transverse_channel_gamma(g);
    const DensityMatrix r3 = apply_product_channel(bell, ch);
    const DensityMatrix r6 = apply_product_channel(ghz, ch);
    structure.check(std::max(max_abs(r3.matrix() - build_sc2_diag(noisy_bell_params(g)).matrix()),
                             max_abs(r6.matrix() - build_sc3_diag(noisy_ghz_params(g)).matrix())));
    concurrence.check(std::abs(concurrence_wootters(r3) - concurrence_noisy_bell_closed(g)));
    consistency.check(std::abs(fmax_noisy_bell_closed(g) - fmax_sc2_diag(noisy_bell_params(g))));
    piecewise.check(std::abs(smax_noisy_ghz_closed(g) - smax_sc3_diag(noisy_ghz_params(g))));
    f3.push_back(fmax_noisy_bell_closed(g));
    s6.push_back(smax_noisy_ghz_closed(g));
  }
  const double g_cross = std::numbers::sqrt2 / 2.0;
  continuity.check(std::abs(smax_noisy_ghz_parity_branch(g_cross) - smax_noisy_ghz_coherence_branch(g_cross)));

  auto has_interior_minimum = [](const std::vector<double>& v) {
    for (std::size_t j = 1; j + 1 < v.size(); ++j) {
      const bool dip = v[j] < v[j - 1] && v[j] <= v[j + 1];
      if (!dip) continue;
      if (std::any_of(v.begin() + static_cast<std::ptrdiff_t>(j) + 1, v.end(), [&](double x) { return x > v[j]; }))
        return true;
    }
    return false;
  };
  witness.check(has_interior_minimum(f3) && has_interior_minimum(s6));
  return {"channels", {trace, structure, concurrence, consistency, piecewise, continuity, witness}};
}

inline std::vector<SuiteReport> run_verify(Suite suite, int samples, std::uint64_t seed,
                                           const MaximizerConfig& base = {}) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  std::vector<SuiteReport> out;
  if (suite == Suite::all || suite == Suite::chsh) out.push_back(verify_chsh(samples, seed, base));
  if (suite == Suite::all || suite == Suite::svetlichny) out.push_back(verify_svetlichny(samples, seed, base));
  if (suite == Suite::all || suite == Suite::measures) out.push_back(verify_measures(samples, seed));
  if (suite == Suite::all || suite == Suite::channels) out.push_back(verify_channels(samples, seed));
  return out;
}

}  // namespace scbell
