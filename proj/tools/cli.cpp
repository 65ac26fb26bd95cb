#include "cli.hpp"

#include "scbell/scbell.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace scbell::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("SCBELL_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("SCBELL_SEED is not an unsigned integer: '") + env + "'");
  }
}

/// State input shared by fmax, smax and entangle: a state file or inline parameters.
struct StateInput {
  std::string state_file;
  std::string kind;
  std::map<std::string, std::string> inline_values;

  void attach(CLI::App* cmd, const std::vector<std::string>& keys) {
    cmd->add_option("--state", state_file, "state file (key = value lines)");
    cmd->add_option("--kind", kind, "state kind: sc2, sc2diag, sc3, sc3diag, bell, ghz");
    for (const auto& key : keys) cmd->add_option("--" + key, inline_values[key], "state parameter " + key);
  }

  bool has_inline() const {
    if (!kind.empty()) return true;
    for (const auto& [k, v] : inline_values)
      if (!v.empty()) return true;
    return false;
  }

  bool has_diag_keys() const {
    for (const auto& [k, v] : inline_values)
      if (!v.empty() && (k[0] == 'b' || k == "c1")) return true;
    return false;
  }

  StateSpec resolve(StateKind schmidt_default, StateKind diag_default) const {
    if (!state_file.empty() && has_inline())
      throw UsageError("--state and inline parameters are mutually exclusive");
    if (!state_file.empty()) return load_state_file(state_file);
    StateKind k = has_diag_keys() ? diag_default : schmidt_default;
    if (!kind.empty()) {
      try {
        k = parse_state_kind(kind);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
    std::map<std::string, KeyValue> values;
    for (const auto& [key, v] : inline_values)
      if (!v.empty()) values[key] = {v, 0};
    return make_state_spec(k, values);
  }
};

bool coherent(const StateSpec& spec) {
  return std::visit(
      [](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SC2Params> || std::is_same_v<P, SC3Params>) return p.a2 != Complex{};
        else return p.c1 != Complex{};
      },
      spec.params);
}

void print_direction(std::ostream& out, const char* label, const MeasurementDirection& d) {
  out << "  " << label << " theta=" << fixed6(d.theta()) << " phi=" << fixed6(d.phi()) << "\n";
}

void print_settings(std::ostream& out, const CHSHSettings& s) {
  print_direction(out, "a  ", s.a);
  print_direction(out, "a' ", s.a_prime);
  print_direction(out, "b  ", s.b);
  print_direction(out, "b' ", s.b_prime);
}

void print_settings(std::ostream& out, const SvetlichnySettings& s) {
  print_direction(out, "a  ", s.a);
  print_direction(out, "a' ", s.a_prime);
  print_direction(out, "b  ", s.b);
  print_direction(out, "b' ", s.b_prime);
  print_direction(out, "c  ", s.c);
  print_direction(out, "c' ", s.c_prime);
}

MaximizerConfig maximizer(std::uint64_t seed, std::optional<int> restarts) {
  MaximizerConfig cfg;
  cfg.seed = seed;
  if (restarts) cfg.restarts = *restarts;
  cfg.validate();
  return cfg;
}

int cmd_fmax(const StateInput& in, std::uint64_t seed, std::optional<int> restarts, std::ostream& out) {
  const StateSpec spec = in.resolve(StateKind::sc2, StateKind::sc2diag);
  if (spec.n_qubits() != 2) throw UsageError("fmax needs a two-qubit state (sc2, sc2diag or bell)");
  const DensityMatrix rho = build_state(spec);
  const double closed = std::holds_alternative<SC2Params>(spec.params)
                            ? fmax_sc2(std::get<SC2Params>(spec.params))
                            : fmax_sc2_diag(std::get<SC2DiagParams>(spec.params));
  const CHSHMaximum numeric = maximize_chsh(rho, maximizer(seed, restarts));
  const double horodecki = fmax_horodecki(rho);

  out << "state            " << describe(spec) << "\n";
  out << "F_max closed     " << fixed6(closed) << "\n";
  out << "F_max numeric    " << fixed6(numeric.value) << "\n";
  out << "F_max horodecki  " << fixed6(horodecki) << "\n";
  out << "verdict          " << to_string(classify(closed, chsh_classical_bound, coherent(spec))) << "\n";
  if (std::abs(horodecki - closed) > 1e-8)
    out << "note             closed form differs from the Horodecki maximum by " << fixed6(horodecki - closed)
        << "\n";
  out << "settings (numeric maximizer, radians)\n";
  print_settings(out, numeric.settings);
  if (const auto* p = std::get_if<SC2Params>(&spec.params)) {
    out << "settings (closed form, radians)\n";
    print_settings(out, optimal_chsh_settings(*p));
  }
  return 0;
}

int cmd_smax(const StateInput& in, std::uint64_t seed, std::optional<int> restarts, std::ostream& out) {
  const StateSpec spec = in.resolve(StateKind::sc3, StateKind::sc3diag);
  if (spec.n_qubits() != 3) throw UsageError("smax needs a three-qubit state (sc3, sc3diag or ghz)");
  const DensityMatrix rho = build_state(spec);
  const double closed = std::holds_alternative<SC3Params>(spec.params)
                            ? smax_sc3(std::get<SC3Params>(spec.params))
                            : smax_sc3_diag(std::get<SC3DiagParams>(spec.params));
  const SvetlichnyMaximum numeric = maximize_svetlichny(rho, maximizer(seed, restarts));

  out << "state            " << describe(spec) << "\n";
  out << "S_max closed     " << fixed6(closed) << "\n";
  out << "S_max numeric    " << fixed6(numeric.value) << "\n";
  out << "verdict          " << to_string(classify(closed, svetlichny_classical_bound, coherent(spec))) << "\n";
  out << "settings (numeric maximizer, radians)\n";
  print_settings(out, numeric.settings);
  if (const auto* p = std::get_if<SC3Params>(&spec.params)) {
    out << "settings (closed form, radians)\n";
    print_settings(out, optimal_svetlichny_settings(*p));
  }
  return 0;
}

int cmd_entangle(const std::string& measure_name, const StateInput& in, std::ostream& out) {
  MeasureKind kind;
  try {
    kind = parse_measure_kind(measure_name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const bool two_qubit = kind == MeasureKind::concurrence || kind == MeasureKind::chi;
  const StateSpec spec = two_qubit ? in.resolve(StateKind::sc2, StateKind::sc2diag)
                                   : in.resolve(StateKind::sc3, StateKind::sc3diag);
  MeasureResult r;
  try {
    r = measure(kind, spec);
  } catch (const DimensionMismatch& e) {
    throw UsageError(e.what());
  }
  out << "state    " << describe(spec) << "\n";
  out << "measure  " << to_string(kind) << "\n";
  out << "value    " << fixed6(r.value) << "\n";
  out << "method   " << to_string(r.method) << "\n";
  return 0;
}

int cmd_sweep(const std::string& initial, double gamma_rate, double t_max, int steps, const std::string& out_path,
              std::uint64_t seed, bool full_budget, std::ostream& out) {
  if (steps < 2) throw UsageError("steps must be >= 2");
  if (!(gamma_rate > 0.0)) throw UsageError("gamma-rate must be > 0");
  if (!(t_max > 0.0)) throw UsageError("t-max must be > 0");
  const bool two = initial == "bell";
  if (!two && initial != "ghz") throw UsageError("initial must be 'bell' or 'ghz'");

  MaximizerConfig cfg;
  cfg.seed = seed;
  if (!full_budget) cfg.restarts = 8;
  const auto records = run_sweep(two ? bell_state() : ghz_state(), gamma_rate, t_max, steps, cfg);

  std::ofstream csv(out_path, std::ios::binary);
  if (!csv) throw UsageError("cannot write '" + out_path + "'");
  csv << (two ? "gamma_t,gamma,fmax_closed,fmax_numeric,concurrence\n" : "gamma_t,gamma,smax_closed,smax_numeric\n");
  for (const auto& r : records) {
    csv << sig12(r.gamma_t) << ',' << sig12(r.gamma) << ',' << sig12(r.closed_value) << ','
        << sig12(r.numeric_value);
    if (two) csv << ',' << sig12(r.measure_value);
    csv << '\n';
  }
  csv.close();
  if (!csv) throw std::runtime_error("failed writing '" + out_path + "'");

  const double bound = two ? chsh_classical_bound : svetlichny_classical_bound;
  const double span = gamma_rate * t_max;
  out << "wrote " << records.size() << " rows to " << out_path << "\n";
  auto closed = [two](double gt) { return two ? fmax_noisy_bell_closed(gamma_of(gt)) : smax_noisy_ghz_closed(gamma_of(gt)); };
  const char* name = two ? "F_max" : "S_max";
  try {
    out << name << " crosses " << bound << " at Γt ≈ " << fixed6(find_threshold(closed, bound, 0.0, span))
        << " (closed form)\n";
  } catch (const std::domain_error&) {
    out << name << " does not cross " << bound << " on Γt in [0, " << fixed6(span) << "] (closed form)\n";
  }
  for (std::size_t k = 1; k < records.size(); ++k)
    if ((records[k - 1].numeric_value > bound) != (records[k].numeric_value > bound)) {
      out << name << " numeric maximum crosses " << bound << " between Γt = " << fixed6(records[k - 1].gamma_t)
          << " and " << fixed6(records[k].gamma_t) << "\n";
      break;
    }
  if (!two) {
    auto branch_gap = [](double gt) {
      return smax_noisy_ghz_parity_branch(gamma_of(gt)) - smax_noisy_ghz_coherence_branch(gamma_of(gt));
    };
    try {
      const double cross = find_threshold(branch_gap, 0.0, 0.0, span);
      out << "branch crossover at Γt ≈ " << fixed6(cross) << " (S_max = " << fixed6(smax_noisy_ghz_closed(gamma_of(cross)))
          << ")\n";
    } catch (const std::domain_error&) {
      out << "branch crossover outside Γt in [0, " << fixed6(span) << "]\n";
    }
  }
  return 0;
}

int cmd_verify(const std::string& suite_name, int samples, std::uint64_t seed, std::ostream& out) {
  if (samples < 1) throw UsageError("samples must be >= 1");
  Suite suite;
  try {
    suite = parse_suite(suite_name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  bool all_ok = true;
  for (const SuiteReport& report : run_verify(suite, samples, seed)) {
    for (const PropertyResult& p : report.properties) {
      out << "[" << report.suite << "] " << p.name << ": " << p.passed << "/" << p.total;
      if (p.tolerance > 0.0) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), " within %.0e (worst %.3e)", p.tolerance, p.worst);
        out << buf;
      }
      out << " " << (p.ok() ? "PASS" : "FAIL") << "\n";
    }
    all_ok = all_ok && report.ok();
  }
  out << (all_ok ? "PASS" : "FAIL") << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

Verdict classify(double value, double bound, bool coherent) {
  if (value > bound + verdict_band) return Verdict::violates;
  if (coherent && std::abs(value - bound) <= verdict_band) return Verdict::boundary;
  return Verdict::no_violation;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::violates: return "VIOLATES";
    case Verdict::boundary: return "BOUNDARY";
    case Verdict::no_violation: return "NO-VIOLATION";
  }
  return "?";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bell-inequality maxima, entanglement measures and noise sweeps for Schmidt-correlated states",
               "scbell"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;

  StateInput fmax_in, smax_in, ent_in;
  auto* fmax = app.add_subcommand("fmax", "maximum CHSH value of a two-qubit SC state");
  fmax_in.attach(fmax, {"a1", "a4", "a2", "b1", "b2", "b3", "b4", "c1"});
  fmax->add_option("--seed", seed, "maximizer seed (default: $SCBELL_SEED or 0)");
  fmax->add_option("--restarts", restarts, "maximizer restarts")->check(CLI::PositiveNumber);

  auto* smax = app.add_subcommand("smax", "maximum Svetlichny value of a three-qubit SC state");
  smax_in.attach(smax, {"a1", "a4", "a2", "b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8", "c1"});
  smax->add_option("--seed", seed, "maximizer seed (default: $SCBELL_SEED or 0)");
  smax->add_option("--restarts", restarts, "maximizer restarts")->check(CLI::PositiveNumber);

  std::string measure_name;
  auto* ent = app.add_subcommand("entangle", "entanglement measure of an SC state");
  ent->add_option("--measure", measure_name, "concurrence, gen_concurrence, ree or chi")->required();
  ent_in.attach(ent, {"a1", "a4", "a2", "b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8", "c1"});

  std::string initial = "bell", out_path;
  double gamma_rate = 1.0, t_max = 3.0;
  int steps = 300;
  bool full_budget = false;
  auto* sweep = app.add_subcommand("sweep", "transverse-noise sweep of the Bell or GHZ state to CSV");
  sweep->add_option("--initial", initial, "bell or ghz");
  sweep->add_option("--gamma-rate", gamma_rate, "decay rate Gamma");
  sweep->add_option("--t-max", t_max, "final time");
  sweep->add_option("--steps", steps, "grid points (>= 2)");
  sweep->add_option("--out", out_path, "CSV output path")->required();
  sweep->add_option("--seed", seed, "maximizer seed (default: $SCBELL_SEED or 0)");
  sweep->add_flag("--full-budget", full_budget, "use the default maximizer budget (32 restarts) per point");

  std::string suite = "all";
  int samples = 200;
  auto* verify = app.add_subcommand("verify", "run the property verification suites");
  verify->add_option("--suite", suite, "all, chsh, svetlichny, measures or channels");
  verify->add_option("--samples", samples, "random samples per property");
  verify->add_option("--seed", seed, "seed (default: $SCBELL_SEED or 0)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    const std::uint64_t s = seed ? *seed : default_seed();
    if (fmax->parsed()) return cmd_fmax(fmax_in, s, restarts, out);
    if (smax->parsed()) return cmd_smax(smax_in, s, restarts, out);
    if (ent->parsed()) return cmd_entangle(measure_name, ent_in, out);
    if (sweep->parsed()) return cmd_sweep(initial, gamma_rate, t_max, steps, out_path, s, full_budget, out);
    if (verify->parsed()) return cmd_verify(suite, samples, s, out);
  } catch (const InvariantViolation& e) {
    err << "error: constraint violated: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace scbell::cli
