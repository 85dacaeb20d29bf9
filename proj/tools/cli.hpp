#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nka::cli {

/// Exit codes of the command-line tool.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kAlarmFired = 2;

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nka::cli
