#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dirad::csv {

using Row = std::vector<std::string>;

/// Reads one RFC-4180 record. Returns nullopt at end of input. Quoted fields
/// may span lines and contain doubled quotes. CRLF and LF are both accepted.
std::optional<Row> read_row(std::istream& in);

/// Quotes a field when it contains a delimiter, quote or line break.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const Row& row);

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);

/// Strict decimal parse of the whole (whitespace-trimmed) field.
std::optional<double> parse_double(std::string_view text);

std::string_view trim(std::string_view s);

}  // namespace dirad::csv
