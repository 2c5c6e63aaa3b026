#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ssm {

/// Process exit codes of the `ssmatch` tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitCertification = 3,
};

/// Runs the command line `args` (without the program name), writing results to
/// `out` and diagnostics to `err`. Returns an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a sampling probability: a decimal, or the literal `sqrt2-1`.
/// Throws std::invalid_argument on anything else.
double parse_probability(const std::string& text);

}  // namespace ssm
