#include <algorithm>
#include <fstream>

#include "climkg/csv.hpp"
#include "climkg/error.hpp"
#include "climkg/graph.hpp"
#include "climkg/hashing.hpp"
#include "climkg/numeric_format.hpp"

namespace climkg::graph {

namespace fs = std::filesystem;
using nlohmann::json;

std::string join_array(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ';';
    for (char c : items[i]) {
      if (c == ';' || c == '\\') out += '\\';
      out += c;
    }
  }
  return out;
}

std::vector<std::string> split_array(std::string_view cell) {
  std::vector<std::string> out;
  if (cell.empty()) return out;
  std::string cur;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    char c = cell[i];
    if (c == '\\' && i + 1 < cell.size()) {
      cur += cell[++i];
    } else if (c == ';') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string format_embedding(const embed::Embedding& e) {
  std::string out;
  bool first = true;
  for (float v : e.values()) {
    if (!first) out += ';';
    first = false;
    out += format_float(v);
  }
  return out;
}

embed::Embedding parse_embedding(std::string_view cell) {
  std::vector<float> values;
  for (const auto& part : split_array(cell)) {
    auto v = parse_float(part);
    if (!v) throw ValidationError("embedding component '" + part + "' is not a number");
    values.push_back(*v);
  }
  return embed::Embedding(std::move(values));
}

CsvLayout layout_from_schema(const GraphSchema& schema) {
  CsvLayout layout;
  for (const auto& l : schema.labels()) layout.nodes[l.name] = NodeLayout{l.properties, l.embedding};
  for (const auto& e : schema.edges()) layout.edges[e.type] = e.properties;
  return layout;
}

namespace {

std::string cell(const Properties& props, const PropertySpec& spec) {
  auto it = props.find(spec.name);
  if (it == props.end() || it->second.is_null()) return {};
  const json& v = it->second;
  switch (spec.type) {
    case PropType::String:
      return v.is_string() ? v.get<std::string>() : v.dump();
    case PropType::Long:
      return std::to_string(v.get<long long>());
    case PropType::Double:
      return format_double(v.get<double>());
    case PropType::Bool:
      return v.get<bool>() ? "true" : "false";
    case PropType::StringArray: {
      std::vector<std::string> items;
      if (v.is_array()) {
        for (const auto& x : v) items.push_back(x.is_string() ? x.get<std::string>() : x.dump());
      } else {
        items.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
      return join_array(items);
    }
  }
  return {};
}

std::string column(const PropertySpec& p) { return p.name + ":" + std::string(type_name(p.type)); }

ManifestEntry write_file(const fs::path& dir, const std::string& file, const std::string& kind,
                         const std::string& name, std::size_t rows, const std::string& body) {
  std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write " + (dir / file).string());
  out << body;
  out.close();
  if (!out) throw RuntimeFailure("failed writing " + (dir / file).string());
  return ManifestEntry{file, kind, name, rows, hashing::sha256_hex(body)};
}

}  // namespace

json Manifest::to_json() const {
  json files = json::array();
  for (const auto& f : this->files) {
    files.push_back({{"file", f.file}, {"kind", f.kind}, {"name", f.name}, {"rows", f.rows}, {"sha256", f.sha256}});
  }
  return json{{"schema_version", schema_version}, {"files", std::move(files)}};
}

Manifest Manifest::from_json(const json& j) {
  try {
    Manifest m;
    m.schema_version = j.at("schema_version").get<std::string>();
    for (const auto& f : j.at("files")) {
      m.files.push_back({f.at("file").get<std::string>(), f.at("kind").get<std::string>(),
                         f.at("name").get<std::string>(), f.at("rows").get<std::size_t>(),
                         f.at("sha256").get<std::string>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
}

Manifest emit_csv(const Graph& graph, const CsvLayout& layout, const fs::path& out_dir,
                  std::string_view schema_version) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw RuntimeFailure("cannot create output directory " + out_dir.string());

  Manifest manifest;
  manifest.schema_version = std::string(schema_version);

  std::map<std::string, std::vector<const Node*>> by_label;
  for (const auto& [_, n] : graph.nodes) by_label[n.label].push_back(&n);  // ids ascending
  for (const auto& [label, nodes] : by_label) {
    auto it = layout.nodes.find(label);
    if (it == layout.nodes.end()) throw ValidationError("no CSV layout for label " + label);
    const NodeLayout& nl = it->second;
    std::vector<std::string> header{":ID", ":LABEL"};
    for (const auto& p : nl.properties) header.push_back(column(p));
    if (nl.embedding) header.push_back("embedding:Float[]");
    std::string body = csv::format_row(header);
    for (const Node* n : nodes) {
      std::vector<std::string> row{n->id, n->label};
      for (const auto& p : nl.properties) row.push_back(cell(n->properties, p));
      if (nl.embedding) row.push_back(n->embedding ? format_embedding(*n->embedding) : std::string());
      body += csv::format_row(row);
    }
    manifest.files.push_back(write_file(out_dir, "nodes_" + label + ".csv", "nodes", label, nodes.size(), body));
  }

  std::map<std::string, std::vector<const Edge*>> by_type;
  for (const auto& e : graph.edges) by_type[e.type].push_back(&e);
  for (auto& [type, edges] : by_type) {
    auto it = layout.edges.find(type);
    if (it == layout.edges.end()) throw ValidationError("no CSV layout for edge type " + type);
    std::sort(edges.begin(), edges.end(),
              [](const Edge* a, const Edge* b) { return std::tie(a->start, a->end) < std::tie(b->start, b->end); });
    std::vector<std::string> header{":START_ID", ":END_ID", ":TYPE"};
    for (const auto& p : it->second) header.push_back(column(p));
    std::string body = csv::format_row(header);
    for (const Edge* e : edges) {
      std::vector<std::string> row{e->start, e->end, e->type};
      for (const auto& p : it->second) row.push_back(cell(e->properties, p));
      body += csv::format_row(row);
    }
    manifest.files.push_back(write_file(out_dir, "edges_" + type + ".csv", "edges", type, edges.size(), body));
  }

  std::sort(manifest.files.begin(), manifest.files.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.file < b.file; });
  std::ofstream mf(out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!mf) throw RuntimeFailure("cannot write manifest in " + out_dir.string());
  mf << manifest.to_json().dump(2) << '\n';
  return manifest;
}

}  // namespace climkg::graph
