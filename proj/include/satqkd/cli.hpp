#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace satqkd::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_numerical_error = 3;

// Runs the command line `args` (without the program name). CSV goes to `out`
// unless a file is requested; failures print one line to `err`:
//   satqkd: error kind=<config|domain|numerical> key=<key or -> message="..."
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace satqkd::cli
