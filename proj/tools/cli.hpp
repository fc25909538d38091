#pragma once

#include <string>
#include <vector>

namespace expgame::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInvalidParams = 2,
  kNonConvergence = 3,
  kPrecondition = 4,
};

struct CommandResult {
  int exit_code = kOk;
  std::string out;  // JSON or CSV payload
  std::string err;  // diagnostics
};

/// Runs one command. `args` excludes the program name.
[[nodiscard]] CommandResult run(const std::vector<std::string>& args);

}  // namespace expgame::cli
