#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace whkit::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInput = 2, kNumeric = 3 };

/// Runs one whkit invocation. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace whkit::cli
