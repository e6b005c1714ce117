#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "climkg/acquisition.hpp"
#include "climkg/csv.hpp"
#include "climkg/dates.hpp"
#include "climkg/error.hpp"
#include "climkg/numeric_format.hpp"
#include "climkg/text.hpp"

namespace climkg::acquisition {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<double> ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

json Summary::to_json() const {
  json cols = json::array();
  for (const auto& c : columns) {
    json j{{"name", c.name}, {"count", c.count}, {"min", c.min}, {"max", c.max}, {"mean", c.mean}};
    j["slope_per_year"] = c.slope ? json(*c.slope) : json(nullptr);
    cols.push_back(std::move(j));
  }
  return json{{"rows", rows}, {"time_column", time_column ? json(*time_column) : json(nullptr)},
              {"columns", std::move(cols)}};
}

namespace {

bool time_like_name(std::string_view header) {
  static const std::set<std::string> names{"time", "date", "datetime", "timestamp", "year", "decimal_year", "epoch"};
  for (const auto& t : text::word_tokens(header)) {
    if (names.count(t)) return true;
  }
  return false;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(std::string_view csv_text) {
  auto parsed = csv::parse(csv_text);
  Table t;
  if (parsed.empty()) return t;
  t.header = parsed.front().cells;
  for (std::size_t i = 1; i < parsed.size(); ++i) {
    if (parsed[i].cells.size() == 1 && parsed[i].cells[0].empty()) continue;
    if (parsed[i].cells.size() != t.header.size()) throw ValidationError("ragged row " + std::to_string(i));
    t.rows.push_back(parsed[i].cells);
  }
  return t;
}

// Decimal years of column c, or nullopt if any non-empty cell fails to parse
// or no cell parses at all.
std::optional<std::vector<std::optional<double>>> time_values(const Table& t, std::size_t c) {
  bool by_name = time_like_name(t.header[c]);
  std::vector<std::optional<double>> out;
  std::size_t parsed = 0;
  for (const auto& row : t.rows) {
    auto cell = text::trim(row[c]);
    if (cell.empty()) {
      out.emplace_back();
      continue;
    }
    bool iso_shape = cell.size() >= 7 && cell[4] == '-';
    if (!iso_shape && !by_name) return std::nullopt;
    auto v = dates::parse_decimal_year(cell);
    if (!v) return std::nullopt;
    out.push_back(v);
    ++parsed;
  }
  if (parsed == 0) return std::nullopt;
  return out;
}

}  // namespace

Summary summarize_table(std::string_view csv_text) {
  Table t = read_table(csv_text);
  Summary s;
  s.rows = t.rows.size();
  std::optional<std::size_t> time_col;
  std::vector<std::optional<double>> times;
  for (std::size_t c = 0; c < t.header.size() && !time_col; ++c) {
    if (auto v = time_values(t, c)) {
      time_col = c;
      times = std::move(*v);
      s.time_column = t.header[c];
    }
  }
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (time_col && c == *time_col) continue;
    std::vector<std::optional<double>> values;
    bool numeric = true;
    std::size_t count = 0;
    for (const auto& row : t.rows) {
      auto cell = text::trim(row[c]);
      if (cell.empty()) {
        values.emplace_back();
        continue;
      }
      auto v = parse_double(cell);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(v);
      ++count;
    }
    if (!numeric || count == 0) continue;
    ColumnStats st;
    st.name = t.header[c];
    st.count = count;
    st.min = INFINITY;
    st.max = -INFINITY;
    double sum = 0;
    std::vector<double> xs, ys;
    for (std::size_t r = 0; r < values.size(); ++r) {
      if (!values[r]) continue;
      double v = *values[r];
      st.min = std::min(st.min, v);
      st.max = std::max(st.max, v);
      sum += v;
      if (time_col && times[r]) {
        xs.push_back(*times[r]);
        ys.push_back(v);
      }
    }
    st.mean = sum / static_cast<double>(count);
    if (time_col) {
      st.slope = ols_slope(xs, ys);
      if (st.slope && std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); })) st.slope = 0.0;
    }
    s.columns.push_back(std::move(st));
  }
  return s;
}

AcquisitionState analyze(AcquisitionState s, const AcquisitionOptions& o) {
  if (!s.validation || !s.validation->passed()) {
    throw ValidationError("analyze requires a dataset that passed validation");
  }
  std::ifstream in(*s.normalized_path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string table = ss.str();
  auto summary = summarize_table(table);
  auto dir = o.out_dir / s.dataset_id;
  auto summary_path = dir / "summary.json";
  {
    std::ofstream out(summary_path, std::ios::binary | std::ios::trunc);
    out << summary.to_json().dump(2) << '\n';
    if (!out) throw RuntimeFailure("cannot write " + summary_path.string());
  }

  // Plot-ready series: time against the first numeric column.
  std::string plot;
  if (summary.time_column && !summary.columns.empty()) {
    Table t = read_table(table);
    std::size_t tc = 0, vc = 0;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      if (t.header[c] == *summary.time_column) tc = c;
    }
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      if (t.header[c] == summary.columns.front().name) vc = c;
    }
    plot = csv::format_row({"time", summary.columns.front().name});
    for (const auto& row : t.rows) {
      auto x = dates::parse_decimal_year(text::trim(row[tc]));
      auto y = parse_double(text::trim(row[vc]));
      if (x && y) plot += csv::format_row({format_double(*x), format_double(*y)});
    }
  } else {
    plot = csv::format_row({"time", "value"});
  }
  std::ofstream out(dir / "plot.csv", std::ios::binary | std::ios::trunc);
  out << plot;
  if (!out) throw RuntimeFailure("cannot write " + (dir / "plot.csv").string());
  s.summary_path = summary_path;
  s.status = Status::Analyzed;
  return s;
}

}  // namespace climkg::acquisition
