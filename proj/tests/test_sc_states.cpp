#include "scbell/sc_states.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

using namespace scbell;
using Catch::Matchers::WithinAbs;

namespace {

std::string violated(auto&& fn) {
  try {
    fn();
  } catch (const InvariantViolation& e) {
    return e.constraint();
  }
  return "";
}

Matrix ket_bra(int dim, int i, int j) {
  Matrix m = Matrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("two-qubit Schmidt family") {
  const Matrix bell = build_sc2({0.5, 0.5, 0.5}).matrix();
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  CHECK(max_abs(bell - phi * phi.adjoint()) < 1e-15);
  CHECK(max_abs(build_sc2({1.0, 0.0, 0.0}).matrix() - ket_bra(4, 0, 0)) == 0.0);

  CHECK(violated([] { build_sc2({0.5, 0.5, 0.6}); }) == "a1*a4 >= |a2|^2");
  CHECK(violated([] { build_sc2({0.7, 0.4, 0.0}); }) == "a1 + a4 = 1");
  CHECK(violated([] { build_sc2({-0.1, 1.1, 0.0}); }) == "a1 >= 0");
  CHECK(violated([] { build_sc2({1.1, -0.1, 0.0}); }) == "a4 >= 0");
}

TEST_CASE("two-qubit diagonal family") {
  CHECK(max_abs(build_sc2_diag({{1, 0, 0, 0}, 0.0}).matrix() - ket_bra(4, 0, 0)) == 0.0);
  CHECK(max_abs(build_sc2_diag({{0.5, 0, 0, 0.5}, 0.5}).matrix() - bell_state().matrix()) < 1e-15);
  CHECK(violated([] { build_sc2_diag({{0.5, 0, 0, 0.5}, 0.6}); }) == "b1*b4 >= |c1|^2");
  CHECK(violated([] { build_sc2_diag({{0.5, 0.1, 0, 0.5}, 0.0}); }) == "sum b_i = 1");
  CHECK(violated([] { build_sc2_diag({{0.6, -0.1, 0, 0.5}, 0.0}); }) == "b2 >= 0");

  SECTION("transverse-noise parameters at gamma 0.8 form a state") {
    const double g2 = 0.64, w2 = 0.36;
    const DensityMatrix rho = build_sc2_diag({{g2 * g2 / 2, g2 * w2 / 2, g2 * w2 / 2, (1 + w2 * w2) / 2}, g2 / 2});
    CHECK_THAT(rho.matrix().trace().real(), WithinAbs(1.0, 1e-15));
    CHECK(rho.min_eigenvalue() >= -1e-15);
  }
  SECTION("a Schmidt state is the diagonal state with b2 = b3 = 0") {
    CounterRng rng(21);
    for (int k = 0; k < 200; ++k) {
      const SC2Params p = random_sc2_params(rng);
      const Matrix diag = build_sc2_diag({{p.a1, 0.0, 0.0, p.a4}, p.a2}).matrix();
      CHECK(max_abs(build_sc2(p).matrix() - diag) == 0.0);
    }
  }
}

TEST_CASE("three-qubit families") {
  Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  CHECK(max_abs(ghz_state().matrix() - ghz * ghz.adjoint()) < 1e-15);
  CHECK(max_abs(build_sc3({1.0, 0.0, 0.0}).matrix() - ket_bra(8, 0, 0)) == 0.0);

  const EigenSystem es = eig_hermitian(build_sc3({0.6, 0.4, {0.3, 0.2}}).matrix());
  int rank = 0;
  for (Eigen::Index k = 0; k < es.values.size(); ++k) rank += es.values(k) > 1e-12;
  CHECK(rank == 2);

  SC3DiagParams ghz_diag;
  ghz_diag.b = {0.5, 0, 0, 0, 0, 0, 0, 0.5};
  ghz_diag.c1 = 0.5;
  CHECK(max_abs(build_sc3_diag(ghz_diag).matrix() - ghz_state().matrix()) < 1e-15);

  SC3DiagParams uniform;
  uniform.b.fill(0.125);
  const DensityMatrix mixed = build_sc3_diag(uniform);
  CHECK(max_abs(mixed.matrix() - maximally_mixed(3).matrix()) < 1e-15);
  for (int cut = 0; cut < 3; ++cut) CHECK(ppt_separable(mixed, cut));

  SECTION("b index order: b4 is |100>, b5 is |011>") {
    SC3DiagParams p;
    p.b = {0, 0, 0, 0.5, 0.5, 0, 0, 0};
    const Matrix m = build_sc3_diag(p).matrix();
    CHECK(m(4, 4) == Complex(0.5));
    CHECK(m(3, 3) == Complex(0.5));
  }
  SECTION("transverse-noise GHZ parameters at gamma 0.9 form a state") {
    const double g2 = 0.81, w2 = 0.19, g = 0.9;
    SC3DiagParams p;
    const double one = g2 * g2 * w2 / 2, two = g2 * w2 * w2 / 2;
    p.b = {g2 * g2 * g2 / 2, one, one, one, two, two, two, (1 + w2 * w2 * w2) / 2};
    p.c1 = g2 * g / 2;
    const DensityMatrix rho = build_sc3_diag(p);
    CHECK_THAT(rho.matrix().trace().real(), WithinAbs(1.0, 1e-14));
    CHECK(rho.min_eigenvalue() >= -1e-15);
  }
  CHECK(violated([] { build_sc3_diag({{0.5, 0, 0, 0, 0, 0, 0, 0.5}, 0.6}); }) == "b1*b8 >= |c1|^2");
}

TEST_CASE("PPT test separates exactly on the coherence") {
  CHECK(ppt_separable(build_sc2({0.3, 0.7, 0.0}), 1));
  CHECK_FALSE(ppt_separable(bell_state(), 1));
  CHECK_FALSE(ppt_separable(build_sc2({0.5, 0.5, 0.2}), 1));
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const double a1 = i / 20.0;
      const double r = std::sqrt(a1 * (1 - a1)) * j / 20.0;
      const Complex a2 = std::polar(r, 0.3 * j);
      const bool sep = a2 == Complex{};
      CHECK(ppt_separable(build_sc2({a1, 1 - a1, a2}), 1) == sep);
      for (int cut = 0; cut < 3; ++cut) CHECK(ppt_separable(build_sc3({a1, 1 - a1, a2}), cut) == sep);
    }
}

TEST_CASE("random parameters are valid") {
  CounterRng rng(1);
  for (int k = 0; k < 500; ++k) {
    CHECK_NOTHROW(build_sc2(random_sc2_params(rng)));
    CHECK_NOTHROW(build_sc3(random_sc3_params(rng)));
    CHECK_NOTHROW(build_sc2_diag(random_sc2_diag_params(rng)));
    CHECK_NOTHROW(build_sc3_diag(random_sc3_diag_params(rng)));
  }
}

TEST_CASE("state text format") {
  const StateSpec s = parse_state_text("# a state\nkind = sc2\na1 = 0.7\n\na2 = 0.2-0.1i  # coherence\n");
  CHECK(s.kind == StateKind::sc2);
  const auto& p = std::get<SC2Params>(s.params);
  CHECK(p.a1 == 0.7);
  CHECK_THAT(p.a4, WithinAbs(0.3, 1e-15));
  CHECK(p.a2 == Complex(0.2, -0.1));
  CHECK(describe(s) == "sc2 a1=0.7 a4=0.30000000000000004 a2=0.2-0.1i");

  const StateSpec d = parse_state_text("kind = sc3diag\nb1 = 0.5\nb8 = 0.5\nc1 = 0.25i\n");
  CHECK(d.n_qubits() == 3);
  CHECK(std::get<SC3DiagParams>(d.params).c1 == Complex(0.0, 0.25));
  CHECK(parse_state_text("kind = ghz").n_qubits() == 3);

  auto error_line = [](const char* text) {
    try {
      parse_state_text(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(error_line("kind = sc2\na1 = 0.5\na1 = 0.5\n") == 3);
  CHECK(error_line("kind = sc2\n\nb1 = 0.5\n") == 3);
  CHECK(error_line("kind = sc2\na2 = 0.1+x\n") == 2);
  CHECK(error_line("kind = sc2\nnonsense\n") == 2);
  CHECK(error_line("kind = qutrit\n") == 1);
  CHECK(error_line("a1 = 0.5\n") == 0);
  CHECK(error_line("kind = sc2\na1 = 0.5i\n") == 2);

  CHECK(violated([] { parse_state_text("kind = sc2\na1 = 0.5\na2 = 0.6\n"); }) == "a1*a4 >= |a2|^2");

  SECTION("files") {
    const auto path = std::filesystem::temp_directory_path() / "scbell_state_test.txt";
    std::ofstream(path) << "kind = sc3\na4 = 0.25\n";
    const StateSpec f = load_state_file(path.string());
    CHECK(std::get<SC3Params>(f.params).a1 == 0.75);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_state_file(path.string()), std::runtime_error);
  }
}
