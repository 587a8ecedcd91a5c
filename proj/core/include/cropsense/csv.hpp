#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cropsense::csv {

// Minimal RFC 4180 reader/writer: comma separated, double-quoted fields with
// "" escapes, CRLF or LF line ends. Quoted fields may not span lines.

struct Row {
    std::size_t line = 0;  // 1-based physical line number in the source
    std::vector<std::string> fields;
};

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;

    /// Index of a header column, if present.
    std::optional<std::size_t> column(std::string_view name) const;
};

std::vector<std::string> split_line(std::string_view line, std::size_t line_no = 0);

/// Reads a header row followed by data rows. Blank lines are skipped.
/// Throws Error(ParseError) on unbalanced quotes or ragged rows.
Table read(std::istream& in);
Table read_file(const std::string& path);

std::string escape(std::string_view field);

/// Joins fields with commas, escaping as needed, without a line terminator.
std::string join(const std::vector<std::string>& fields);

}  // namespace cropsense::csv
