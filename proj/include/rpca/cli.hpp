#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rpca::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kNotConverged = 3,
  kIo = 4,
  kNumeric = 5,
};

/// Runs one command line (without the program name), e.g.
/// {"gen", "--rank", "10", "--out", "dir"}. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rpca::cli
