#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace papercad::cli {

inline constexpr int kExitClean = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitFailed = 2;

// args[0] is the program name. Returns 0 (clean), 1 (rule violations) or
// 2 (could not run).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace papercad::cli
