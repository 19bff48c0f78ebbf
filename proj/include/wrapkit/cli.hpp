#pragma once

// Command-line front end. Exit codes: 0 success, 1 a check failed, 2 usage,
// configuration or library error.

#include <string>
#include <vector>

namespace wrapkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace wrapkit::cli
