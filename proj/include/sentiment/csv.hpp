#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sentiment::csv {

using Row = std::vector<std::string>;

/// Parses comma-separated text with double-quote quoting ("" escapes a quote).
/// Quoted fields may span lines. CRLF and LF line endings are accepted.
std::vector<Row> parse(std::string_view text);

/// Quotes a field only when it contains a comma, quote or line break.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const Row& row);

std::string read_file(const std::string& path);

}  // namespace sentiment::csv

namespace sentiment {

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

}  // namespace sentiment
