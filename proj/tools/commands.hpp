#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace covsel::cli {

/// Runs the covsel command line with `args` (excluding the program name).
/// Exit codes: 0 success (solve: gap reached), 1 bad input, 2 solve finished
/// above the gap tolerance.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace covsel::cli
