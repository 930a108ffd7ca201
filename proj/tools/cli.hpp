#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dvrlu::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kUsage = 2, kPrecision = 3, kExhausted = 4 };

// Runs one command line (args excludes the program name). Results go to
// out unless --output names a file; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Shortest round-trip decimal form with '.' as separator, independent of locale.
std::string format_double(double x);

}  // namespace dvrlu::cli
