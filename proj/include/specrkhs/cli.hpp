#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace specrkhs::cli {

inline constexpr const char* kVersion = "0.1.0";

// Runs one command line (args excludes the program name). Exit codes: 0 success, 1 numerical
// failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace specrkhs::cli
