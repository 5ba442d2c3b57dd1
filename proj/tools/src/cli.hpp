#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace diophant::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kPrecondition = 3,
  kInvariant = 4,
};

/// Runs one command line (without the program name). Data goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace diophant::cli
