#include "scbell/bell.hpp"
#include "scbell/maximizer.hpp"
#include "scbell/random.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>

using namespace scbell;
using Catch::Matchers::WithinAbs;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

const MeasurementDirection z = axis_z();

double max_eigenvalue(const Matrix& m) { return eig_hermitian(m).values.maxCoeff(); }

}  // namespace

TEST_CASE("measurement directions and observables") {
  CHECK(max_abs(observable(axis_z()) - pauli_z()) < 1e-15);
  CHECK(max_abs(observable(axis_x()) - pauli_x()) < 1e-15);
  CHECK(max_abs(observable(axis_y()) - pauli_y()) < 1e-15);
  CHECK_THROWS_AS(MeasurementDirection(-0.1, 0.0), InvariantViolation);
  CHECK_THROWS_AS(MeasurementDirection(1.0, 2 * pi), InvariantViolation);
  const auto w = MeasurementDirection::wrapped(-0.5, 7.0);
  CHECK((w.vector() - MeasurementDirection::bloch(-0.5, 7.0)).norm() < 1e-14);
  CHECK(w.theta() >= 0.0);
  CHECK(w.phi() < 2 * pi);
}

TEST_CASE("CHSH operator") {
  CHECK(max_abs(chsh_operator({z, z, z, z}) - 2.0 * kron(pauli_z(), pauli_z())) < 1e-15);

  const MeasurementDirection b(pi / 4, 0.0), bp(pi / 4, pi);
  CHECK_THAT(max_eigenvalue(chsh_operator({z, axis_x(), b, bp})), WithinAbs(2 * sqrt2, 1e-12));

  const MeasurementDirection a(0.7, 1.1), c(2.0, 4.0);
  CHECK(max_abs(chsh_operator({a, a, c, c}) - 2.0 * kron(observable(a), observable(c))) < 1e-14);
}

TEST_CASE("expectations") {
  CounterRng rng(17);
  auto random_dir = [&rng] { return MeasurementDirection(rng.uniform(0.0, pi), rng.uniform(0.0, 2 * pi)); };
  for (int k = 0; k < 20; ++k) {
    CHECK_THAT(chsh_expectation(maximally_mixed(2), {random_dir(), random_dir(), random_dir(), random_dir()}),
               WithinAbs(0.0, 1e-15));
    const SvetlichnySettings s{random_dir(), random_dir(), random_dir(), random_dir(), random_dir(), random_dir()};
    CHECK_THAT(svetlichny_expectation(maximally_mixed(3), s), WithinAbs(0.0, 1e-15));
    CHECK(chsh_expectation(build_sc2({0.5, 0.5, 0.3}), {random_dir(), random_dir(), random_dir(), random_dir()}) <=
          2 * std::sqrt(1.36) + 1e-12);
  }
  CHECK_THAT(svetlichny_expectation(build_sc3({1.0, 0.0, 0.0}), {z, z, z, z, z, axis_minus_z()}),
             WithinAbs(4.0, 1e-14));
}

TEST_CASE("closed forms") {
  CHECK(fmax_sc2({1.0, 0.0, 0.0}) == 2.0);
  CHECK_THAT(fmax_sc2({0.5, 0.5, 0.5}), WithinAbs(2 * sqrt2, 1e-15));
  CHECK_THAT(fmax_sc2({0.5, 0.5, 0.3}), WithinAbs(2.332381, 1e-6));

  CHECK_THAT(fmax_sc2_diag({{0.5, 0, 0, 0.5}, 0.5}), WithinAbs(2 * sqrt2, 1e-15));
  CHECK(fmax_sc2_diag({{0.25, 0.25, 0.25, 0.25}, 0.0}) == 0.0);

  CHECK(smax_sc3({1.0, 0.0, 0.0}) == 4.0);
  CHECK_THAT(smax_sc3({0.5, 0.5, 0.5}), WithinAbs(4 * sqrt2, 1e-14));
  CHECK_THAT(smax_sc3({0.5, 0.5, 1.0 / (2 * sqrt2)}), WithinAbs(4.0, 1e-14));

  SC3DiagParams product;
  product.b = {1, 0, 0, 0, 0, 0, 0, 0};
  CHECK(smax_sc3_diag(product) == 4.0);
  CHECK_THAT(smax_sc3_diag({{0.5, 0, 0, 0, 0, 0, 0, 0.5}, 0.5}), WithinAbs(4 * sqrt2, 1e-14));

  SECTION("depend on the coherence only through its modulus") {
    CounterRng rng(30);
    for (int k = 0; k < 200; ++k) {
      const SC2Params p = random_sc2_params(rng);
      const Complex turn = std::polar(1.0, rng.uniform(0.0, 2 * pi));
      CHECK_THAT(fmax_sc2({p.a1, p.a4, p.a2 * turn}), WithinAbs(fmax_sc2(p), 1e-14));
      CHECK_THAT(smax_sc3({p.a1, p.a4, p.a2 * turn}), WithinAbs(smax_sc3({p.a1, p.a4, p.a2}), 1e-14));
    }
  }
}

TEST_CASE("optimal settings attain the closed forms") {
  auto chsh_at = [](SC2Params p) { return chsh_expectation(build_sc2(p), optimal_chsh_settings(p)); };
  auto svet_at = [](SC3Params p) { return svetlichny_expectation(build_sc3(p), optimal_svetlichny_settings(p)); };

  CHECK_THAT(chsh_at({0.5, 0.5, 0.5}), WithinAbs(2 * sqrt2, 1e-12));
  CHECK_THAT(chsh_at({0.5, 0.5, {0.0, 0.3}}), WithinAbs(fmax_sc2({0.5, 0.5, {0.0, 0.3}}), 1e-12));
  CHECK_THAT(chsh_at({0.5, 0.5, {0.2, 0.2}}), WithinAbs(2 * std::sqrt(1.32), 1e-12));
  CHECK_THAT(chsh_at({0.3, 0.7, 0.0}), WithinAbs(2.0, 1e-12));

  const CHSHSettings real_case = optimal_chsh_settings({0.5, 0.5, 0.5});
  CHECK_THAT(real_case.b.theta(), WithinAbs(pi / 4, 1e-12));
  CHECK(real_case.b.vector().y() == 0.0);

  CHECK_THAT(svet_at({1.0, 0.0, 0.0}), WithinAbs(4.0, 1e-12));
  CHECK_THAT(svet_at({0.0, 1.0, 0.0}), WithinAbs(4.0, 1e-12));
  CHECK_THAT(svet_at({0.5, 0.5, 0.5}), WithinAbs(4 * sqrt2, 1e-12));
  CHECK_THAT(svet_at({0.6, 0.4, 0.2}), WithinAbs(8 * sqrt2 * 0.2, 1e-12));
  const SvetlichnySettings plane = optimal_svetlichny_settings({0.6, 0.4, 0.2});
  for (const auto* d : {&plane.a, &plane.a_prime, &plane.b, &plane.b_prime, &plane.c, &plane.c_prime})
    CHECK_THAT(d->vector().z(), WithinAbs(0.0, 1e-15));

  CounterRng rng(31);
  for (int k = 0; k < 300; ++k) {
    const SC2Params p = random_sc2_params(rng);
    CHECK_THAT(chsh_at(p), WithinAbs(fmax_sc2(p), 1e-9));
    CHECK_THAT(svet_at({p.a1, p.a4, p.a2}), WithinAbs(smax_sc3({p.a1, p.a4, p.a2}), 1e-9));
  }
}

TEST_CASE("Horodecki value") {
  CHECK_THAT(fmax_horodecki(bell_state()), WithinAbs(2 * sqrt2, 1e-14));
  CHECK_THAT(fmax_horodecki(maximally_mixed(2)), WithinAbs(0.0, 1e-15));
  CHECK_THAT(fmax_horodecki(build_sc2({0.5, 0.5, 0.3})), WithinAbs(2 * std::sqrt(1.36), 1e-14));
  const Eigen::Matrix3d t = correlation_matrix(bell_state());
  CHECK((t - Eigen::Vector3d(1, -1, 1).asDiagonal().toDenseMatrix()).norm() < 1e-15);
}

TEST_CASE("correlation routes agree with operator traces") {
  CounterRng rng(41);
  auto random_dir = [&rng] { return MeasurementDirection(rng.uniform(0.0, pi), rng.uniform(0.0, 2 * pi)); };
  for (int k = 0; k < 50; ++k) {
    const DensityMatrix r3 = random_density_matrix(rng, 3);
    const CorrelationTensor3 t = correlation_tensor(r3);
    const auto a = random_dir(), b = random_dir(), c = random_dir();
    const double direct =
        (r3.matrix() * kron({observable(a), observable(b), observable(c)})).trace().real();
    CHECK_THAT(t.contract(a.vector(), b.vector(), c.vector()), WithinAbs(direct, 1e-13));
  }
}

TEST_CASE("split directions") {
  const MeasurementDirection b(pi / 4, 0.0), bp(pi / 4, pi);
  const SplitDirections s = split_directions(b, bp);
  CHECK_THAT(s.angle, WithinAbs(pi / 4, 1e-14));
  CHECK_THAT(s.d.dot(s.d_prime), WithinAbs(0.0, 1e-15));
  CHECK((s.d - Vec3(0, 0, 1)).norm() < 1e-14);
}

TEST_CASE("numerical maximizer") {
  MaximizerConfig cfg;
  SECTION("two qubits") {
    CHECK_THAT(maximize_chsh(bell_state(), cfg).value, WithinAbs(2 * sqrt2, 1e-6));
    CHECK_THAT(maximize_chsh(maximally_mixed(2), cfg).value, WithinAbs(0.0, 1e-6));
    CHECK_THAT(maximize_chsh(build_sc2({0.5, 0.5, 0.3}), cfg).value, WithinAbs(2.332381, 1e-5));
    const CHSHMaximum m = maximize_chsh(build_sc2({0.8, 0.2, {0.1, -0.3}}), cfg);
    const SplitDirections s = split_directions(m.settings.b, m.settings.b_prime);
    CHECK_THAT(s.d.dot(s.d_prime), WithinAbs(0.0, 1e-9));
    CHECK_THAT(chsh_expectation(build_sc2({0.8, 0.2, {0.1, -0.3}}), m.settings), WithinAbs(m.value, 1e-15));
  }
  SECTION("three qubits") {
    CHECK_THAT(maximize_svetlichny(ghz_state(), cfg).value, WithinAbs(4 * sqrt2, 1e-5));
    CHECK_THAT(maximize_svetlichny(build_sc3({1.0, 0.0, 0.0}), cfg).value, WithinAbs(4.0, 1e-5));
    CHECK_THAT(maximize_svetlichny(build_sc3({0.5, 0.5, 0.3}), cfg).value, WithinAbs(8 * sqrt2 * 0.3, 1e-4));
  }
  SECTION("bit-identical for a fixed seed") {
    const DensityMatrix rho = build_sc2({0.65, 0.35, {0.2, 0.1}});
    cfg.seed = 99;
    const CHSHMaximum a = maximize_chsh(rho, cfg), b = maximize_chsh(rho, cfg);
    CHECK(a.value == b.value);
    CHECK(a.settings.b.theta() == b.settings.b.theta());
    CHECK(a.settings.b_prime.phi() == b.settings.b_prime.phi());
  }
  SECTION("bounded by probes and by Tsirelson") {
    CounterRng rng(52);
    for (int k = 0; k < 5; ++k) {
      const DensityMatrix rho = random_density_matrix(rng, 2);
      const double best = maximize_chsh(rho, cfg).value;
      CHECK(best <= 2 * sqrt2 + 1e-12);
      CHECK_THAT(best, WithinAbs(fmax_horodecki(rho), 1e-8));
      for (int j = 0; j < 50; ++j) {
        const CHSHSettings probe{MeasurementDirection(rng.uniform(0.0, pi), rng.uniform(0.0, 2 * pi)),
                                 MeasurementDirection(rng.uniform(0.0, pi), rng.uniform(0.0, 2 * pi)),
                                 MeasurementDirection(rng.uniform(0.0, pi), rng.uniform(0.0, 2 * pi)),
                                 MeasurementDirection(rng.uniform(0.0, pi), rng.uniform(0.0, 2 * pi))};
        CHECK(best >= chsh_expectation(rho, probe) - 1e-6);
      }
    }
  }
  SECTION("separable Schmidt states stay within the classical bound") {
    for (double a1 : {0.0, 0.2, 0.5, 0.9}) CHECK(maximize_chsh(build_sc2({a1, 1 - a1, 0.0}), cfg).value <= 2 + 1e-6);
  }
  SECTION("rejects wrong sizes and bad budgets") {
    CHECK_THROWS_AS(maximize_chsh(ghz_state(), cfg), DimensionMismatch);
    CHECK_THROWS_AS(maximize_svetlichny(bell_state(), cfg), DimensionMismatch);
    cfg.restarts = 0;
    CHECK_THROWS_AS(maximize_chsh(bell_state(), cfg), std::invalid_argument);
  }
}
