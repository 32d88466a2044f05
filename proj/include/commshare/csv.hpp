#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace commshare::csv {

// Reads a text file into lines, dropping a trailing '\r' (CRLF input) and a
// UTF-8 byte-order mark. Throws MissingFile if the file cannot be opened.
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view line, char sep = ',');

// Strict decimal parse of the whole (trimmed) field; nullopt for anything else.
std::optional<double> parse_double(std::string_view field);

// Shortest text that parses back to the same double.
std::string format_double(double value);

// Fixed-point formatting, used for human-facing report columns.
std::string format_fixed(double value, int decimals);

}  // namespace commshare::csv
