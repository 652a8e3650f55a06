#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

// Minimal helpers for the project's comma-separated formats.
namespace agc::csv {

struct Row {
    std::size_t row;  // 1-based data row number (header excluded)
    std::vector<std::string> cells;
};

/// Reads a header line (which must equal `header`) followed by data rows.
/// Blank lines are skipped; a trailing '\r' is tolerated.
std::vector<Row> read_rows(std::istream& in, std::string_view header);

double parse_double(const Row& row, std::size_t col);
std::size_t parse_size(const Row& row, std::size_t col);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Writes `content` to `path`, replacing any existing file.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace agc::csv
