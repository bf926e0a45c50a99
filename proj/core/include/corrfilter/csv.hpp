#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace corrfilter::csv {

/// Reads a comma-separated file into rows of trimmed fields. Blank lines are
/// skipped; a trailing '\r' is tolerated. Quoting is not supported.
std::vector<std::vector<std::string>> read(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view line);

/// Strict decimal parse; throws Error(UnparsableNumber).
double parse_double(std::string_view field);

/// Shortest round-trip representation ("nan" for NaN).
std::string format(double value);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace corrfilter::csv
