#include "climkg/csv.hpp"

#include "climkg/error.hpp"

namespace climkg::csv {

std::vector<Row> parse(std::string_view text) {
  std::vector<Row> rows;
  Row row;
  std::string cell;
  std::size_t line = 1;
  bool in_quotes = false;
  bool row_started = false;
  std::size_t quote_line = 0;

  auto end_cell = [&] {
    row.cells.push_back(std::move(cell));
    cell.clear();
  };
  auto end_row = [&] {
    end_cell();
    rows.push_back(std::move(row));
    row = Row{};
    row_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (!row_started) {
      row.line = line;
      row_started = true;
    }
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        cell.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        quote_line = line;
        break;
      case ',':
        end_cell();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        cell.push_back(c);
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        cell.push_back(c);
    }
  }
  if (in_quotes) {
    throw ValidationError("unterminated quoted field starting on line " + std::to_string(quote_line));
  }
  if (row_started) end_row();
  return rows;
}

std::string escape(std::string_view cell) {
  bool needs = cell.find_first_of(",\"\r\n") != std::string_view::npos ||
               (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t' || cell.back() == ' ' ||
                                  cell.back() == '\t'));
  if (!needs) return std::string(cell);
  std::string out;
  out.reserve(cell.size() + 2);
  out.push_back('"');
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out.push_back(',');
    out.append(escape(cells[i]));
  }
  out.push_back('\n');
  return out;
}

}  // namespace climkg::csv
