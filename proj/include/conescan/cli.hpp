#pragma once

#include <string>
#include <vector>

namespace conescan {

// Runs the command-line tool on the given arguments (without the program
// name).  Returns the process exit code: 0 success, 1 constraint violation,
// 2 bad input or arguments, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace conescan
