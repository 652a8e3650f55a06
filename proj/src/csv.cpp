#include "agc/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <system_error>

#include "agc/errors.hpp"

namespace agc::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void bad_cell(const Row& row, std::size_t col, const char* what) {
    const std::string cell = col < row.cells.size() ? row.cells[col] : std::string{};
    throw DataError("parse error at row " + std::to_string(row.row) + ", column " + std::to_string(col + 1) + ": " +
                    what + " '" + cell + "'");
}

}  // namespace

std::vector<Row> read_rows(std::istream& in, std::string_view header) {
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        have_header = true;
        break;
    }
    if (!have_header) return {};
    if (trim(line) != header) {
        throw DataError("unexpected header '" + std::string(trim(line)) + "', expected '" + std::string(header) + "'");
    }
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        rows.push_back({rows.size() + 1, split(line)});
    }
    return rows;
}

double parse_double(const Row& row, std::size_t col) {
    if (col >= row.cells.size()) bad_cell(row, col, "missing cell");
    const std::string& s = row.cells[col];
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) bad_cell(row, col, "not a finite number");
    return v;
}

std::size_t parse_size(const Row& row, std::size_t col) {
    if (col >= row.cells.size()) bad_cell(row, col, "missing cell");
    const std::string& s = row.cells[col];
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) bad_cell(row, col, "not a non-negative integer");
    return v;
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace agc::csv
