#include <fstream>
#include <sstream>

#include "climkg/csv.hpp"
#include "climkg/error.hpp"
#include "climkg/hashing.hpp"
#include "climkg/numeric_format.hpp"
#include "climkg/store.hpp"

namespace climkg::store {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

graph::PropertySpec parse_column(const std::string& header) {
  auto colon = header.rfind(':');
  if (colon == std::string::npos || colon == 0) throw ValidationError("column '" + header + "' lacks a type");
  return {header.substr(0, colon), graph::type_from_name(header.substr(colon + 1))};
}

json parse_cell(const std::string& cell, graph::PropType type) {
  switch (type) {
    case graph::PropType::String:
      return cell;
    case graph::PropType::Long: {
      auto v = parse_int(cell);
      if (!v) throw ValidationError("'" + cell + "' is not a Long");
      return *v;
    }
    case graph::PropType::Double: {
      auto v = parse_double(cell);
      if (!v) throw ValidationError("'" + cell + "' is not a Double");
      return *v;
    }
    case graph::PropType::Bool:
      if (cell == "true") return true;
      if (cell == "false") return false;
      throw ValidationError("'" + cell + "' is not a Bool");
    case graph::PropType::StringArray:
      return graph::split_array(cell);
  }
  return nullptr;
}

graph::Properties parse_properties(const std::vector<std::string>& cells, std::size_t offset,
                                   const std::vector<graph::PropertySpec>& specs) {
  graph::Properties props;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& c = cells[offset + i];
    if (c.empty()) continue;
    props[specs[i].name] = parse_cell(c, specs[i].type);
  }
  return props;
}

}  // namespace

PropertyGraph PropertyGraph::load_csv(const fs::path& dir, LoadReport* report) {
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  graph::Manifest manifest;
  try {
    manifest = graph::Manifest::from_json(json::parse(read_file(dir / "manifest.json")));
  } catch (const json::exception& e) {
    throw ValidationError("manifest " + (dir / "manifest.json").string() + ": " + e.what());
  }

  graph::Graph g;
  graph::CsvLayout layout;
  for (const auto& entry : manifest.files) {
    auto body = read_file(dir / entry.file);
    auto digest = hashing::sha256_hex(body);
    if (digest != entry.sha256) {
      throw ValidationError("checksum mismatch for " + entry.file + ": manifest " + entry.sha256 + ", file " + digest);
    }
    auto rows = csv::parse(body);
    if (rows.empty()) throw ValidationError(entry.file + ": missing header");
    const auto& header = rows.front().cells;
    auto where = [&](std::size_t line) { return entry.file + ":" + std::to_string(line) + ": "; };

    if (entry.kind == "nodes") {
      if (header.size() < 2 || header[0] != ":ID" || header[1] != ":LABEL") {
        throw ValidationError(entry.file + ": node header must start with :ID,:LABEL");
      }
      graph::NodeLayout nl;
      for (std::size_t i = 2; i < header.size(); ++i) {
        if (header[i] == "embedding:Float[]") {
          if (i + 1 != header.size()) throw ValidationError(entry.file + ": embedding must be the last column");
          nl.embedding = true;
        } else {
          nl.properties.push_back(parse_column(header[i]));
        }
      }
      layout.nodes[entry.name] = nl;
      for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        try {
          if (row.cells.size() != header.size()) {
            throw ValidationError("expected " + std::to_string(header.size()) + " cells, found " +
                                  std::to_string(row.cells.size()));
          }
          graph::Node n;
          n.id = row.cells[0];
          n.label = row.cells[1];
          if (n.id.empty()) throw ValidationError("empty :ID");
          if (n.label != entry.name) throw ValidationError("label " + n.label + " in file for " + entry.name);
          n.properties = parse_properties(row.cells, 2, nl.properties);
          if (nl.embedding && !row.cells.back().empty()) n.embedding = graph::parse_embedding(row.cells.back());
          std::string id = n.id;
          if (!g.nodes.emplace(id, std::move(n)).second) throw ValidationError("duplicate id " + id);
          ++rep.nodes;
        } catch (const ValidationError& e) {
          rep.diagnostics.push_back(where(row.line) + e.what());
        }
      }
    } else if (entry.kind == "edges") {
      if (header.size() < 3 || header[0] != ":START_ID" || header[1] != ":END_ID" || header[2] != ":TYPE") {
        throw ValidationError(entry.file + ": edge header must start with :START_ID,:END_ID,:TYPE");
      }
      std::vector<graph::PropertySpec> specs;
      for (std::size_t i = 3; i < header.size(); ++i) specs.push_back(parse_column(header[i]));
      layout.edges[entry.name] = specs;
      for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        try {
          if (row.cells.size() != header.size()) {
            throw ValidationError("expected " + std::to_string(header.size()) + " cells, found " +
                                  std::to_string(row.cells.size()));
          }
          graph::Edge e{row.cells[0], row.cells[1], row.cells[2], parse_properties(row.cells, 3, specs)};
          if (e.type != entry.name) throw ValidationError("type " + e.type + " in file for " + entry.name);
          g.edges.push_back(std::move(e));
        } catch (const ValidationError& e) {
          rep.diagnostics.push_back(where(row.line) + e.what());
        }
      }
    } else {
      throw ValidationError("manifest entry " + entry.file + " has unknown kind " + entry.kind);
    }
  }

  // Edges whose endpoints did not load are reported, never kept.
  std::vector<graph::Edge> kept;
  for (auto& e : g.edges) {
    if (!g.nodes.count(e.start) || !g.nodes.count(e.end)) {
      rep.diagnostics.push_back(e.type + ": dangling edge " + e.start + " -> " + e.end);
      continue;
    }
    kept.push_back(std::move(e));
  }
  std::sort(kept.begin(), kept.end(), [](const graph::Edge& a, const graph::Edge& b) {
    return std::tie(a.type, a.start, a.end) < std::tie(b.type, b.start, b.end);
  });
  g.edges = std::move(kept);
  rep.edges = g.edges.size();
  return from_graph(std::move(g), std::move(layout), manifest.schema_version);
}

}  // namespace climkg::store
