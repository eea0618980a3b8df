#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace replan {

/// Shortest decimal text that parses back to the identical double.
std::string format_real(double x);

/// Throws ParseError (tagged with `line`) unless the whole field is a number.
double parse_real(std::string_view field, std::size_t line);
long long parse_integer(std::string_view field, std::size_t line);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

/// Runs `writer` into `<path>.tmp`, then renames over `path`. Errors name the path.
void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& writer);

}  // namespace replan
