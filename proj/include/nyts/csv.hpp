#pragma once

#include <string>       // std::string
#include <string_view>  // std::string_view
#include <vector>       // std::vector

namespace nyts::csv {

/// One parsed record plus the 1-based line it started on.
struct record {
    std::vector<std::string> fields;
    std::size_t line{ 0 };
};

/// Splits RFC 4180 text (quoted fields, doubled quotes, CRLF or LF) into records.
/// Blank lines are skipped. A leading UTF-8 byte order mark is ignored.
[[nodiscard]] std::vector<record> parse(std::string_view text);

/// Quotes a field when it contains a separator, quote, or line break.
[[nodiscard]] std::string escape(std::string_view field);

/// Joins escaped fields with commas and terminates the line with '\n'.
[[nodiscard]] std::string format_row(const std::vector<std::string> &fields);

}  // namespace nyts::csv
