#pragma once

#include <charconv>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace esampling::csv {

/// Shortest round-trip decimal representation of `value`.
[[nodiscard]] std::string format_double(double value);

/// Parses a full-token double; throws std::invalid_argument on junk.
[[nodiscard]] double parse_double(std::string_view text);

[[nodiscard]] std::vector<std::string_view> split(std::string_view line, char sep = ',');

[[nodiscard]] std::string_view trim(std::string_view text);

/// Rows of a comma-separated file with a mandatory header row.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

/// Throws std::runtime_error with a line-anchored message on malformed input.
[[nodiscard]] Table read(std::istream& in);

}  // namespace esampling::csv
