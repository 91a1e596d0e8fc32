#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace checkworthy::text {

std::vector<std::string_view> split(std::string_view s, char delim);

std::string_view trim(std::string_view s);

std::string to_lower(std::string_view s);

// Strict parsers: the whole field must be consumed.
std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

// Shortest round-trip representation.
std::string format_double(double v);

/// Reads one line, dropping a trailing '\r'. Returns false at end of stream.
bool read_line(std::istream& in, std::string& line);

/// Removes a leading UTF-8 byte order mark.
void strip_bom(std::string& line);

/// Lines of a word-list file: trimmed, blank lines and '#' comments dropped.
std::vector<std::string> read_word_list(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace checkworthy::text
