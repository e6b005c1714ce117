#include <fstream>
#include <set>
#include <sstream>

#include "climkg/csv.hpp"
#include "climkg/enrich.hpp"
#include "climkg/error.hpp"
#include "climkg/text.hpp"

namespace climkg::enrich {

std::string_view to_string(Component c) {
  switch (c) {
    case Component::ATM: return "ATM";
    case Component::OCN: return "OCN";
    case Component::LND: return "LND";
    case Component::ICE: return "ICE";
    case Component::ROF: return "ROF";
    case Component::GLC: return "GLC";
    case Component::WAV: return "WAV";
  }
  return "ATM";
}

std::string_view long_name(Component c) {
  switch (c) {
    case Component::ATM: return "Atmosphere";
    case Component::OCN: return "Ocean";
    case Component::LND: return "Land";
    case Component::ICE: return "Sea Ice";
    case Component::ROF: return "River Runoff";
    case Component::GLC: return "Land Ice";
    case Component::WAV: return "Ocean Waves";
  }
  return "";
}

Component component_from_string(std::string_view s) {
  auto t = text::trim(s);
  for (auto c : kAllComponents) {
    if (text::iequals(t, to_string(c))) return c;
  }
  throw ValidationError("unknown model component '" + std::string(t) + "'");
}

std::vector<CesmVariable> parse_cesm_catalog(std::string_view csv_text) {
  auto rows = csv::parse(csv_text);
  if (rows.empty()) throw ValidationError("variable catalog is empty");
  const auto& header = rows.front().cells;
  const std::vector<std::string> expected{"name", "description", "component", "units"};
  if (header.size() != expected.size()) throw ValidationError("variable catalog header must be name,description,component,units");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (text::to_lower(text::trim(header[i])) != expected[i]) {
      throw ValidationError("variable catalog header must be name,description,component,units");
    }
  }
  std::vector<CesmVariable> out;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() == 1 && text::trim(row.cells[0]).empty()) continue;
    auto where = "variable catalog line " + std::to_string(row.line);
    if (row.cells.size() != 4) throw ValidationError(where + ": expected 4 columns");
    CesmVariable v;
    v.name = std::string(text::trim(row.cells[0]));
    if (v.name.empty()) throw ValidationError(where + ": empty name");
    v.description = std::string(text::trim(row.cells[1]));
    try {
      v.component = component_from_string(row.cells[2]);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    v.units = std::string(text::trim(row.cells[3]));
    if (!seen.insert(v.name).second) throw ValidationError(where + ": duplicate name " + v.name);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<CesmVariable> load_cesm_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read variable catalog " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_cesm_catalog(ss.str());
}

}  // namespace climkg::enrich
