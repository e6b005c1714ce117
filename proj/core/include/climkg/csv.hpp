#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace climkg::csv {

struct Row {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> cells;
};

/// RFC-4180 reader. Accepts LF or CRLF line endings; a trailing newline does
/// not produce an empty record. Throws ValidationError on an unterminated
/// quoted field, naming the line.
std::vector<Row> parse(std::string_view text);

/// Quotes a cell iff it contains a comma, quote, CR or LF, or has leading or
/// trailing whitespace.
std::string escape(std::string_view cell);

/// Comma-joined escaped cells followed by '\n'.
std::string format_row(const std::vector<std::string>& cells);

}  // namespace climkg::csv
