#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace corrfilter::cli {

enum ExitCode : int { Ok = 0, Usage = 1, DataError = 2, NumericError = 3 };

/// Runs the tool with argv-style arguments (args[0] is the program name).
/// Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace corrfilter::cli
