#include <fstream>
#include <map>
#include <sstream>

#include "climkg/acquisition.hpp"
#include "climkg/csv.hpp"
#include "climkg/error.hpp"

namespace climkg::acquisition {

namespace fs = std::filesystem;
using nlohmann::json;

std::string normalize_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  auto rows = csv::parse(text);
  std::vector<const csv::Row*> kept;
  for (const auto& r : rows) {
    if (r.cells.size() == 1 && r.cells[0].empty()) continue;  // blank line
    kept.push_back(&r);
  }
  if (kept.empty()) throw ValidationError("table has no header row");
  std::size_t width = kept.front()->cells.size();
  std::string out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i]->cells.size() != width) {
      throw ValidationError("ragged row " + std::to_string(i) + " (line " + std::to_string(kept[i]->line) + "): " +
                            std::to_string(kept[i]->cells.size()) + " cells, header has " + std::to_string(width));
    }
    out += csv::format_row(kept[i]->cells);
  }
  return out;
}

namespace {

std::string cell_text(const json& v) {
  if (v.is_null()) return {};
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string normalize_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
  if (doc.is_object()) doc = json::array({doc});
  if (!doc.is_array()) throw ValidationError("JSON table must be an array of objects");

  std::vector<std::string> columns;
  std::map<std::string, std::size_t> index;
  std::vector<std::map<std::string, std::string>> rows;
  auto column = [&](const std::string& name) {
    if (index.emplace(name, columns.size()).second) columns.push_back(name);
  };
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& item = doc[i];
    if (!item.is_object()) throw ValidationError("JSON table element " + std::to_string(i) + " is not an object");
    std::map<std::string, std::string> row;
    for (const auto& [k, v] : item.items()) {
      if (v.is_object()) {
        for (const auto& [ik, iv] : v.items()) {
          column(k + "." + ik);
          row[k + "." + ik] = cell_text(iv);
        }
      } else {
        column(k);
        row[k] = cell_text(v);
      }
    }
    rows.push_back(std::move(row));
  }
  if (columns.empty()) throw ValidationError("JSON table has no columns");
  std::string out = csv::format_row(columns);
  for (const auto& row : rows) {
    std::vector<std::string> cells;
    for (const auto& c : columns) {
      auto it = row.find(c);
      cells.push_back(it == row.end() ? std::string() : it->second);
    }
    out += csv::format_row(cells);
  }
  return out;
}

AcquisitionState normalize(AcquisitionState s, const AcquisitionOptions& o) {
  if (!s.raw_path) {
    s.status = Status::Failed;
    s.diagnostics.push_back("normalize: no raw artifact");
    return s;
  }
  if (s.format != "csv" && s.format != "json") {
    s.status = Status::Failed;
    s.diagnostics.push_back("normalize: unsupported format " + s.format);
    return s;
  }
  std::ifstream in(*s.raw_path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string table;
  try {
    table = s.format == "csv" ? normalize_csv(ss.str()) : normalize_json(ss.str());
  } catch (const ValidationError& e) {
    s.status = Status::Failed;
    s.diagnostics.push_back(std::string("normalize: ") + e.what());
    return s;
  }
  auto path = o.out_dir / s.dataset_id / "norm.csv";
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << table;
  out.close();
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  s.normalized_path = path;
  s.status = Status::Preprocessed;
  return s;
}

}  // namespace climkg::acquisition
