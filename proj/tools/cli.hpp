#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seaport::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kUnstable = 2,
  kInsufficientData = 3,
  kToleranceFailure = 4,
};

/// Runs one invocation. `args` excludes the program name. Reports go to
/// `out` (or the --out file), diagnostics to `err`. Nothing is written to the
/// report destination when the result is kInputError.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace seaport::cli
