#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace etaflat {

enum ExitCode : int {
  kExitOk = 0,
  kExitTypeError = 1,
  kExitParseError = 2,
  kExitVerifyFailure = 3,
  kExitUsage = 64,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace etaflat
