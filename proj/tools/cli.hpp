#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace scbell::cli {

enum class Verdict { violates, boundary, no_violation };

/// Band around the classical bound reported as BOUNDARY.
inline constexpr double verdict_band = 1e-9;

/// VIOLATES above bound + band; BOUNDARY within the band for states with a
/// nonzero coherence; NO-VIOLATION otherwise.
Verdict classify(double value, double bound, bool coherent);
std::string_view to_string(Verdict v);

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 verification failure, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scbell::cli
