#ifndef HBVM_CLI_HPP
#define HBVM_CLI_HPP

#include <iosfwd>

namespace hbvm::cli {

/// Exit statuses of run().
enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kUsageError = 2,
};

/// Entry point of the `hbvm` command-line tool. argv[0] is the program name.
/// Reports go to `out` (or to --out), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hbvm::cli

#endif  // HBVM_CLI_HPP
