#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace colsparse::cli {

/// Runs one command line (args excludes the program name). Returns the exit code:
/// 0 success, 1 usage or validation error, 2 broken internal invariant.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace colsparse::cli
