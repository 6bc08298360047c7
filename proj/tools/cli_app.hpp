#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fsl::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kFailure = 2 };

/// Parses and executes one command line (`args` excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fsl::cli
