#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bilin::cli {

/// Exit statuses of run().
enum Status : int { Success = 0, FalseVerdict = 1, UsageError = 2, DomainError = 3 };

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bilin::cli
