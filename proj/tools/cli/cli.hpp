#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tamura::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kViolation = 1,
  kNumericInconclusive = 2,
  kOracleDisagreement = 3,
  kUsage = 64,
  kHypothesis = 65,
};

/// Runs one command line (without the program name). Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tamura::cli
