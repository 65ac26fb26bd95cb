// Schmidt-correlated (SC) state families on two and three qubits, their
// parameter validation, the Bell/GHZ reference states, the PPT test, and the
// line-based state-file format.

#pragma once

#include "scbell/qmat.hpp"
#include "scbell/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace scbell {

/// a1|00><00| + a2|00><11| + a2*|11><00| + a4|11><11|
struct SC2Params {
  double a1 = 1.0;
  double a4 = 0.0;
  Complex a2{};
};

/// b1..b4 on |00>,|01>,|10>,|11> plus coherence c1 |00><11|
struct SC2DiagParams {
  std::array<double, 4> b{1.0, 0.0, 0.0, 0.0};
  Complex c1{};
};

/// a1|000><000| + a2|000><111| + a2*|111><000| + a4|111><111|
struct SC3Params {
  double a1 = 1.0;
  double a4 = 0.0;
  Complex a2{};
};

/// b1..b8 on |000>,|001>,|010>,|100>,|011>,|101>,|110>,|111> plus c1 |000><111|
struct SC3DiagParams {
  std::array<double, 8> b{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  Complex c1{};
};

/// Computational-basis index of each b_k in SC3DiagParams (note b4 = |100>, b5 = |011>).
inline constexpr std::array<int, 8> sc3_diag_basis{0, 1, 2, 4, 3, 5, 6, 7};

inline constexpr double tol_param_sum = 1e-12;
inline constexpr double tol_param_psd = 1e-12;

namespace detail {

inline void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw InvariantViolation(std::string(name) + " finite", "value is not finite");
}

template <class P>
void validate_schmidt(const P& p) {
  require_finite(p.a1, "a1");
  require_finite(p.a4, "a4");
  require_finite(p.a2.real(), "a2");
  require_finite(p.a2.imag(), "a2");
  if (p.a1 < 0) throw InvariantViolation("a1 >= 0", "a1 = " + std::to_string(p.a1));
  if (p.a4 < 0) throw InvariantViolation("a4 >= 0", "a4 = " + std::to_string(p.a4));
  if (std::abs(p.a1 + p.a4 - 1.0) > tol_param_sum)
    throw InvariantViolation("a1 + a4 = 1", "a1 + a4 = " + std::to_string(p.a1 + p.a4));
  if (std::norm(p.a2) > p.a1 * p.a4 + tol_param_psd)
    throw InvariantViolation("a1*a4 >= |a2|^2", "a1*a4 = " + std::to_string(p.a1 * p.a4) +
                                                    ", |a2|^2 = " + std::to_string(std::norm(p.a2)));
}

template <std::size_t N>
void validate_diag(const std::array<double, N>& b, Complex c1) {
  double sum = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const std::string name = "b" + std::to_string(k + 1);
    require_finite(b[k], name.c_str());
    if (b[k] < 0) throw InvariantViolation(name + " >= 0", name + " = " + std::to_string(b[k]));
    sum += b[k];
  }
  require_finite(c1.real(), "c1");
  require_finite(c1.imag(), "c1");
  if (std::abs(sum - 1.0) > tol_param_sum)
    throw InvariantViolation("sum b_i = 1", "sum = " + std::to_string(sum));
  const std::string psd = "b1*b" + std::to_string(N) + " >= |c1|^2";
  if (std::norm(c1) > b.front() * b.back() + tol_param_psd)
    throw InvariantViolation(psd, "b1*b" + std::to_string(N) + " = " + std::to_string(b.front() * b.back()) +
                                      ", |c1|^2 = " + std::to_string(std::norm(c1)));
}

inline Matrix x_state(int n_qubits, Complex coherence) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  Matrix m = Matrix::Zero(d, d);
  m(0, d - 1) = coherence;
  m(d - 1, 0) = std::conj(coherence);
  return m;
}

}  // namespace detail

inline void validate(const SC2Params& p) { detail::validate_schmidt(p); }
inline void validate(const SC3Params& p) { detail::validate_schmidt(p); }
inline void validate(const SC2DiagParams& p) { detail::validate_diag(p.b, p.c1); }
inline void validate(const SC3DiagParams& p) { detail::validate_diag(p.b, p.c1); }

inline DensityMatrix build_sc2(const SC2Params& p) {
  validate(p);
  Matrix m = detail::x_state(2, p.a2);
  m(0, 0) = p.a1;
  m(3, 3) = p.a4;
  return DensityMatrix(std::move(m));
}

inline DensityMatrix build_sc2_diag(const SC2DiagParams& p) {
  validate(p);
  Matrix m = detail::x_state(2, p.c1);
  for (int k = 0; k < 4; ++k) m(k, k) = p.b[k];
  return DensityMatrix(std::move(m));
}

inline DensityMatrix build_sc3(const SC3Params& p) {
  validate(p);
  Matrix m = detail::x_state(3, p.a2);
  m(0, 0) = p.a1;
  m(7, 7) = p.a4;
  return DensityMatrix(std::move(m));
}

inline DensityMatrix build_sc3_diag(const SC3DiagParams& p) {
  validate(p);
  Matrix m = detail::x_state(3, p.c1);
  for (int k = 0; k < 8; ++k) m(sc3_diag_basis[k], sc3_diag_basis[k]) = p.b[k];
  return DensityMatrix(std::move(m));
}

inline SC2Params bell_params() { return {0.5, 0.5, Complex(0.5, 0.0)}; }
inline SC3Params ghz_params() { return {0.5, 0.5, Complex(0.5, 0.0)}; }

/// (|00> + |11>)/sqrt(2)
inline DensityMatrix bell_state() { return build_sc2(bell_params()); }
/// (|000> + |111>)/sqrt(2)
inline DensityMatrix ghz_state() { return build_sc3(ghz_params()); }

/// True iff the partial transpose on qubit `cut` has no eigenvalue below -1e-10.
inline bool ppt_separable(const DensityMatrix& rho, int cut) {
  const Matrix pt = partial_transpose(rho, cut);
  return eig_hermitian(pt).values.minCoeff() >= tol_psd;
}

// ---------------------------------------------------------------------------
// Seeded random parameters
// ---------------------------------------------------------------------------

namespace detail {

inline Complex random_coherence(CounterRng& rng, double max_modulus) {
  const double r = max_modulus * rng.uniform();
  const double chi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return std::polar(r, chi);
}

template <std::size_t N>
std::array<double, N> random_simplex(CounterRng& rng) {
  std::array<double, N> b{};
  double sum = 0.0;
  for (auto& x : b) {
    x = -std::log(1.0 - rng.uniform());
    sum += x;
  }
  for (auto& x : b) x /= sum;
  return b;
}

template <std::size_t N>
void renormalise(std::array<double, N>& b) {
  double sum = 0.0;
  for (double x : b) sum += x;
  for (auto& x : b) x /= sum;
  // absorb rounding into the largest entry so the sum is exactly representable as 1
  double rest = 0.0;
  std::size_t big = 0;
  for (std::size_t k = 0; k < N; ++k)
    if (b[k] > b[big]) big = k;
  for (std::size_t k = 0; k < N; ++k)
    if (k != big) rest += b[k];
  b[big] = 1.0 - rest;
}

}  // namespace detail

/// a1 uniform on [0,1], |a2| uniform on [0, sqrt(a1 a4)], phase uniform.
inline SC2Params random_sc2_params(CounterRng& rng) {
  SC2Params p;
  p.a1 = rng.uniform();
  p.a4 = 1.0 - p.a1;
  p.a2 = detail::random_coherence(rng, std::sqrt(p.a1 * p.a4));
  return p;
}

inline SC3Params random_sc3_params(CounterRng& rng) {
  const SC2Params p = random_sc2_params(rng);
  return {p.a1, p.a4, p.a2};
}

/// Half the draws are uniform on the simplex; the other half shrink the
/// off-Schmidt weights so the coherent block dominates.
inline SC2DiagParams random_sc2_diag_params(CounterRng& rng) {
  SC2DiagParams p;
  p.b = detail::random_simplex<4>(rng);
  if (rng.uniform() < 0.5) {
    const double shrink = rng.uniform(0.0, 0.2);
    p.b[1] *= shrink;
    p.b[2] *= shrink;
  }
  detail::renormalise(p.b);
  p.c1 = detail::random_coherence(rng, std::sqrt(p.b[0] * p.b[3]));
  return p;
}

inline SC3DiagParams random_sc3_diag_params(CounterRng& rng) {
  SC3DiagParams p;
  p.b = detail::random_simplex<8>(rng);
  if (rng.uniform() < 0.5) {
    const double shrink = rng.uniform(0.0, 0.2);
    for (int k = 1; k < 7; ++k) p.b[k] *= shrink;
  }
  detail::renormalise(p.b);
  p.c1 = detail::random_coherence(rng, std::sqrt(p.b[0] * p.b[7]));
  return p;
}

// ---------------------------------------------------------------------------
// State specification and file format
// ---------------------------------------------------------------------------

enum class StateKind { sc2, sc2diag, sc3, sc3diag, bell, ghz };

inline std::string_view to_string(StateKind k) {
  switch (k) {
    case StateKind::sc2: return "sc2";
    case StateKind::sc2diag: return "sc2diag";
    case StateKind::sc3: return "sc3";
    case StateKind::sc3diag: return "sc3diag";
    case StateKind::bell: return "bell";
    case StateKind::ghz: return "ghz";
  }
  return "?";
}

inline StateKind parse_state_kind(std::string_view s) {
  for (StateKind k : {StateKind::sc2, StateKind::sc2diag, StateKind::sc3, StateKind::sc3diag, StateKind::bell,
                      StateKind::ghz})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown state kind '" + std::string(s) + "'");
}

using StateParams = std::variant<SC2Params, SC2DiagParams, SC3Params, SC3DiagParams>;

struct StateSpec {
  StateKind kind = StateKind::sc2;
  StateParams params = SC2Params{};

  int n_qubits() const {
    return std::holds_alternative<SC2Params>(params) || std::holds_alternative<SC2DiagParams>(params) ? 2 : 3;
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Parameter names accepted by a state kind, in canonical order.
inline std::vector<std::string> state_keys(StateKind kind) {
  switch (kind) {
    case StateKind::sc2:
    case StateKind::sc3: return {"a1", "a4", "a2"};
    case StateKind::sc2diag: return {"b1", "b2", "b3", "b4", "c1"};
    case StateKind::sc3diag: return {"b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8", "c1"};
    case StateKind::bell:
    case StateKind::ghz: return {};
  }
  return {};
}

struct KeyValue {
  std::string value;
  int line = 0;
};

/// Builds and validates a StateSpec from textual key/value pairs.
/// Defaults: a1 = 0.5 (or 1 - a4 when only a4 is given), a4 = 1 - a1,
/// a2 = c1 = 0, b_i = 0.
inline StateSpec make_state_spec(StateKind kind, const std::map<std::string, KeyValue>& values) {
  const auto keys = state_keys(kind);
  for (const auto& [key, kv] : values)
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ParseError(kv.line, "unknown key '" + key + "' for kind " + std::string(to_string(kind)));

  auto real = [&](const std::string& key, double fallback) {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
      const Complex z = parse_complex(it->second.value);
      if (z.imag() != 0.0) throw std::invalid_argument("expected a real number");
      return z.real();
    } catch (const std::invalid_argument& e) {
      throw ParseError(it->second.line, key + ": " + e.what());
    }
  };
  auto complex = [&](const std::string& key) {
    auto it = values.find(key);
    if (it == values.end()) return Complex{};
    try {
      return parse_complex(it->second.value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(it->second.line, key + ": " + e.what());
    }
  };
  auto schmidt = [&]<class P>(P p) {
    const bool has_a1 = values.count("a1") > 0;
    const bool has_a4 = values.count("a4") > 0;
    if (!has_a1 && has_a4) {
      p.a4 = real("a4", 0.5);
      p.a1 = 1.0 - p.a4;
    } else {
      p.a1 = real("a1", 0.5);
      p.a4 = real("a4", 1.0 - p.a1);
    }
    p.a2 = complex("a2");
    validate(p);
    return p;
  };
  auto diag = [&]<class P>(P p) {
    for (std::size_t k = 0; k < p.b.size(); ++k) p.b[k] = real("b" + std::to_string(k + 1), 0.0);
    p.c1 = complex("c1");
    validate(p);
    return p;
  };

  switch (kind) {
    case StateKind::sc2: return {kind, schmidt(SC2Params{})};
    case StateKind::sc3: return {kind, schmidt(SC3Params{})};
    case StateKind::sc2diag: return {kind, diag(SC2DiagParams{})};
    case StateKind::sc3diag: return {kind, diag(SC3DiagParams{})};
    case StateKind::bell: return {kind, bell_params()};
    case StateKind::ghz: return {kind, ghz_params()};
  }
  throw std::logic_error("unreachable state kind");
}

/// Parses `key = value` lines. Blank lines and `#` comments are ignored;
/// `kind` is required and unknown or repeated keys are errors.
inline StateSpec parse_state_text(std::string_view text) {
  std::map<std::string, KeyValue> values;
  std::optional<StateKind> kind;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ParseError(line_no, "expected 'key = value'");
    if (key == "kind") {
      if (kind) throw ParseError(line_no, "duplicate key 'kind'");
      try {
        kind = parse_state_kind(value);
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
      }
      continue;
    }
    if (values.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
    values[key] = {value, line_no};
  }
  if (!kind) throw ParseError(0, "missing required key 'kind'");
  return make_state_spec(*kind, values);
}

inline StateSpec load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open state file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_state_text(buf.str());
}

inline DensityMatrix build_state(const StateSpec& spec) {
  return std::visit(
      [](const auto& p) -> DensityMatrix {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SC2Params>) return build_sc2(p);
        else if constexpr (std::is_same_v<P, SC2DiagParams>) return build_sc2_diag(p);
        else if constexpr (std::is_same_v<P, SC3Params>) return build_sc3(p);
        else return build_sc3_diag(p);
      },
      spec.params);
}

/// One-line human-readable summary, e.g. `sc2 a1=0.5 a4=0.5 a2=0.5+0i`.
inline std::string describe(const StateSpec& spec) {
  std::string out(to_string(spec.kind));
  std::visit(
      [&out](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SC2Params> || std::is_same_v<P, SC3Params>) {
          out += " a1=" + detail::shortest(p.a1) + " a4=" + detail::shortest(p.a4) + " a2=" + format_complex(p.a2);
        } else {
          for (std::size_t k = 0; k < p.b.size(); ++k)
            out += " b" + std::to_string(k + 1) + "=" + detail::shortest(p.b[k]);
          out += " c1=" + format_complex(p.c1);
        }
      },
      spec.params);
  return out;
}

}  // namespace scbell
