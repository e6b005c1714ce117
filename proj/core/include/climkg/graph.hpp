#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "climkg/embedding.hpp"
#include "climkg/enrich.hpp"

namespace climkg::graph {

// ---------------------------------------------------------------------------
// Ontology

enum class PropType { String, Long, Double, Bool, StringArray };
std::string_view type_name(PropType t);  // bulk-load header spelling
PropType type_from_name(std::string_view s);

struct PropertySpec {
  std::string name;
  PropType type = PropType::String;

  friend bool operator==(const PropertySpec&, const PropertySpec&) = default;
};

struct LabelSpec {
  std::string name;
  std::vector<PropertySpec> properties;  // column order
  std::vector<std::string> natural_key;  // property names hashed into the id
  bool embedding = false;
  bool workflow = false;
};

struct EdgeSpec {
  std::string type;
  std::string from;
  std::string to;
  std::vector<PropertySpec> properties;
};

enum class SimilarEdges { Clique, Star };

class GraphSchema {
 public:
  /// The 20 node classes, 8 workflow classes and 24 relationship types.
  /// `embed_cesm_variable` turns on vectors for CESMVariable nodes.
  static GraphSchema builtin(bool embed_cesm_variable = false);

  const std::vector<LabelSpec>& labels() const noexcept { return labels_; }
  const std::vector<EdgeSpec>& edges() const noexcept { return edges_; }
  const LabelSpec* label(std::string_view name) const;
  const EdgeSpec* edge(std::string_view type) const;
  bool embedding_enabled(std::string_view label) const;
  std::vector<std::string> label_names() const;

  /// Replaces the natural key of `label`; every key must be a declared property.
  void set_natural_key(const std::string& label, std::vector<std::string> keys);

 private:
  std::vector<LabelSpec> labels_;
  std::vector<EdgeSpec> edges_;
};

// ---------------------------------------------------------------------------
// Instances

using Properties = std::map<std::string, nlohmann::json>;  // scalars or string arrays

struct Node {
  std::string id;
  std::string label;
  Properties properties;
  std::optional<embed::Embedding> embedding;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  std::string start;
  std::string end;
  std::string type;
  Properties properties;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Graph {
  std::map<std::string, Node> nodes;  // by id
  std::vector<Edge> edges;            // sorted by (type, start, end), unique

  std::size_t count(std::string_view label) const;
};

/// First 16 hex digits of SHA-256 over schema_version, label and the sorted
/// `key=value` pairs (values trimmed and lowercased), separated by U+001F.
/// Throws ValidationError when no key field has a non-empty value.
std::string node_id(std::string_view schema_version, std::string_view label,
                    const std::map<std::string, std::string>& key_fields);

// ---------------------------------------------------------------------------
// Synthesis

struct WorkflowSeed {
  std::string label;
  std::string name;
  std::string description;
};

/// JSON array of `{"label","name","description"}`; labels must be workflow classes.
std::vector<WorkflowSeed> load_workflows(const std::filesystem::path& path);
std::vector<WorkflowSeed> parse_workflows(const nlohmann::json& j);

struct BuildOptions {
  std::string schema_version = "1.0";
  SimilarEdges similar_edges = SimilarEdges::Clique;
  double confidence_threshold = 0.5;
};

struct BuildInputs {
  const std::vector<enrich::EnrichedRecord>* records = nullptr;
  const std::vector<enrich::CesmVariable>* catalog = nullptr;
  const std::vector<enrich::VariableCluster>* clusters = nullptr;  // computed from catalog when null
  const std::vector<WorkflowSeed>* workflows = nullptr;
  /// Maps science keywords to model variables; describesVariable edges are
  /// skipped when null.
  enrich::VariableClassifier* keyword_classifier = nullptr;
};

struct BuildResult {
  Graph graph;
  std::vector<std::string> diagnostics;
};

/// Nodes first (deduplicated by id, properties merged), then edges; dangling
/// or schema-illegal edges are dropped with a diagnostic. Embeddings are
/// attached to every node of an embedding-enabled label.
BuildResult build_graph(const BuildInputs& inputs, const GraphSchema& schema, const BuildOptions& options,
                        embed::Embedder& embedder);

/// Text each embedding-enabled node is encoded from.
std::string embedding_text(const Node& node);

/// Referential integrity and schema closure. Empty when the graph is valid.
std::vector<std::string> validate_graph(const Graph& graph, const GraphSchema& schema);

// ---------------------------------------------------------------------------
// Bulk-load CSV

struct NodeLayout {
  std::vector<PropertySpec> properties;
  bool embedding = false;
};

/// Column layout of every file; taken from the schema when building, from the
/// headers when loading.
struct CsvLayout {
  std::map<std::string, NodeLayout> nodes;                   // by label
  std::map<std::string, std::vector<PropertySpec>> edges;    // by type
};

CsvLayout layout_from_schema(const GraphSchema& schema);

struct ManifestEntry {
  std::string file;
  std::string kind;  // "nodes" | "edges"
  std::string name;  // label or edge type
  std::size_t rows = 0;
  std::string sha256;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::string schema_version;
  std::vector<ManifestEntry> files;  // sorted by file name

  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json& j);
};

/// `nodes_<Label>.csv` and `edges_<type>.csv` for every non-empty label and
/// type, plus `manifest.json`. Rows sorted by id (edges by start, end).
Manifest emit_csv(const Graph& graph, const CsvLayout& layout, const std::filesystem::path& out_dir,
                  std::string_view schema_version);

/// `;`-joined array cell; `\` and `;` inside elements are backslash-escaped.
std::string join_array(const std::vector<std::string>& items);
std::vector<std::string> split_array(std::string_view cell);

std::string format_embedding(const embed::Embedding& e);
embed::Embedding parse_embedding(std::string_view cell);

}  // namespace climkg::graph
