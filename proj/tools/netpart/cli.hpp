#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netpart::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kDiverged = 3,
  kInfeasibleK = 4,
  kEvaluationMismatch = 5,
};

/// Runs `netpart <command> [flags]`. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netpart::cli
