#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wegner2p::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageError = 1,
  kBoundViolated = 2,
};

/// Runs one subcommand. `args` includes the program name. Diagnostics go to
/// `err`; the report goes to --out, or to `out` when no path is given.
///
/// Exit status: 0 on success / verdict holds, 2 when a bound is violated
/// beyond 3 sigma (or a proven statement is contradicted), 1 on usage,
/// config or precondition errors.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wegner2p::cli
