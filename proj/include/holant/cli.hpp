#pragma once

// Command-line dispatch. Every report is a JSON object with a "verdict".

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "holant/grid.hpp"

namespace holant {

/// Exit codes: pass/success verdicts, failure verdicts (distinguisher,
/// vanishing, mismatch), usage or format errors.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  /// Entrywise comparisons. HOLANT_TOL overrides the default.
  double tolerance = 1e-9;
  /// Final checks of recovered transforms.
  double verify_tolerance = 1e-6;
  std::uint64_t seed = 0x5eed;
  std::string output;
};

/// Reads HOLANT_TOL; throws on an unparsable or non-positive value.
RunConfig default_config();

/// `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Fixtures shared by `selftest` and the acceptance suite.

/// Covariant binary "x" fed by two copies of the unary "y".
SignatureGrid xyy_grid();
/// (!=2 | [a, b, 1, 0, 0]): contravariant disequality "ne" and a covariant
/// arity-4 symmetric Boolean "F".
SignatureSet disequality_pair_set(Complex a, Complex b);

struct FixtureResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// The seed only drives the random graph corpus; verdicts do not depend on it.
std::vector<FixtureResult> run_selftest(std::uint64_t seed);

}  // namespace holant
