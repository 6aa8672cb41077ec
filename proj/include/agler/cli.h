#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace agler::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kValidationError = 2,
  kSolverUnknown = 3,
  kUnknownSubcommand = 64,
  kMalformedJson = 65,
};

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out` (or the --out file), structured errors to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const std::vector<std::string>& Subcommands();

}  // namespace agler::cli
