#pragma once

#include <string>
#include <vector>

namespace shadowforge::cli {

/// Exit codes: 0 success, 2 configuration/usage error, 3 query budget
/// exhausted, 1 anything else.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;

/// Full command-line entrypoint; args[0] is the program name.
int run(std::vector<std::string> args);

}  // namespace shadowforge::cli
