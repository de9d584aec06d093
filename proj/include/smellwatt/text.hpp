#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace smellwatt::text {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

/// Fixed-point text with `decimals` digits, for human-facing reports.
std::string format_fixed(double value, int decimals);

double parse_double(std::string_view field);
std::int64_t parse_int(std::string_view field);

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// 1-based line number of each row in the source, for error messages.
    std::vector<std::size_t> row_lines;
};

/// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF tolerated.
/// Blank lines are skipped.
CsvTable parse_csv(std::string_view content);
CsvTable read_csv(const std::filesystem::path& path);

std::string csv_escape(std::string_view field);
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace smellwatt::text
