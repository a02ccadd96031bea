#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mobility::cli {

enum ExitStatus : int {
  kSuccess = 0,
  kUsageError = 1,
  kInputError = 2,
  kComputationError = 3,
};

// Runs one command line (args[0] is the program name). Reports go to `out`;
// diagnostics and usage text go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace mobility::cli
