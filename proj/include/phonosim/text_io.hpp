#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace phonosim {

// Shortest decimal text that round-trips to the same double. All numeric
// exports go through this so artifacts are byte-stable across runs.
std::string format_double(double value);

std::string_view trim(std::string_view s);

// Lines without terminators; strips a UTF-8 BOM and trailing '\r'.
std::vector<std::string> read_lines(std::istream& in);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view s, char delimiter);
std::vector<std::string> split_whitespace(std::string_view s);

// Minimal RFC 4180 field handling: quotes only when needed.
std::string csv_escape(std::string_view field);
std::vector<std::string> parse_csv_line(std::string_view line, const std::string& source,
                                        std::size_t line_number);
std::string join_csv(const std::vector<std::string>& fields);

double parse_double(std::string_view text, const std::string& source, std::size_t line_number);
long long parse_integer(std::string_view text, const std::string& source,
                        std::size_t line_number);
bool parse_bool(std::string_view text, const std::string& source, std::size_t line_number);

}  // namespace phonosim
