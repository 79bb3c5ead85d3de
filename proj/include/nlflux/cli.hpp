#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlflux::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kInvalidConfig = 2,
  kSolverFailure = 3,
  kIoError = 4,
};

/// Runs one command. `args` excludes the program name. Reports go to --out when
/// given and to `out` otherwise; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nlflux::cli
