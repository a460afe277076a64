#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rlemask::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kIo = 2, kCapacity = 3 };

// Runs one command line (without the program name) and returns its exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rlemask::cli
