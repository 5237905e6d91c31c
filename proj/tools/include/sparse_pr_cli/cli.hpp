#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sparse_pr::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,     // bad flags, malformed files, inconsistent inputs
  kNegative = 2,  // not certified, or a collision was found
  kFragile = 3,   // fragile rank decision under --strict
};

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics and the log line to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparse_pr::cli
