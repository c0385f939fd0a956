#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curvemetrics::app {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitValidation = 2,  // bad arguments or input files, unknown names
  kExitDegenerateScope = 3,
  kExitUnwritable = 4,
};

/// Runs the command line `args` (without the program name), writing results
/// to `out` and diagnostics to `err`. Returns the exit code.
auto run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) -> int;

}  // namespace curvemetrics::app
