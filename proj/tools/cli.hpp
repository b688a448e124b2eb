#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace infbin::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kVerificationFailed = 2,
  kLimit = 3,
};

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal that reads back to the same double.
std::string shortest(double x);

/// Parses "60", "60s", "5m" or "1h" into seconds.
double parse_budget(const std::string& text);

/// "a:b:step" (inclusive, points rounded to 1e-12) or "p1,p2,...".
std::vector<double> parse_grid(const std::string& text);

}  // namespace infbin::cli
