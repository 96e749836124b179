#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crteq {

enum ExitCode : int { kExitOk = 0, kExitCompute = 1, kExitUsage = 2 };

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace crteq
