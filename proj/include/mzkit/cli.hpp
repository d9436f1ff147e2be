#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mzkit::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,           // success; for certify: certified
  kUsageError = 1,   // bad flags or IO failure
  kRefuted = 2,      // certify: refuted
  kInconclusive = 3  // certify: inconclusive
};

/// Runs the tool on `args` (without the program name). Reports go to files
/// named by --out or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const char* version();

}  // namespace mzkit::cli
