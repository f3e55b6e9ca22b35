#pragma once

#include <iosfwd>

#include "robcons/error.hpp"

namespace robcons {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitDisconnected = 3,
  kExitFactorization = 4,
  kExitMarginShortfall = 5,
  kExitEventGraphMismatch = 6,
  kExitRobustConditionFailed = 7,
};

int exit_code_for(ErrorKind kind);

/// Entry point of the `robcons` tool: spectra | margin | synth | simulate |
/// seed-config. Reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace robcons
