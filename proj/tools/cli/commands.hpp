#pragma once

#include <iosfwd>

namespace fbmbt::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kAcceptanceFailure = 2,
  kRuntimeError = 3,
};

/// Entry point of the fbmbt tool. Subcommands: generate, verify, scaling,
/// skeleton, selftest. The default output directory is taken from
/// FBMBT_OUTPUT_DIR when --output-dir is not given.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Deterministic identity suites; prints one line per suite.
bool selftest(std::ostream& out);

}  // namespace fbmbt::cli
