#ifndef MGENV_CLI_HPP
#define MGENV_CLI_HPP

#include <iosfwd>
#include <span>
#include <string>

namespace mgenv {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitUnbounded = 2,
  kExitNoConvergence = 3,
  kExitRejected = 4,  // check failed or oracle mismatch
};

/// Runs one command line (without the program name).  Never throws.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace mgenv

#endif  // MGENV_CLI_HPP
