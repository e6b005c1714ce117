#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "climkg/graph.hpp"

namespace climkg::store {

enum class Direction { Out, In };

struct TextHit {
  const graph::Node* node = nullptr;
  double score = 0.0;
};

struct LoadReport {
  std::vector<std::string> diagnostics;  // "file:line: reason" per rejected row
  std::size_t nodes = 0;
  std::size_t edges = 0;
};

/// Memory-resident property graph with label, adjacency, text and vector
/// indexes. Immutable once constructed.
class PropertyGraph {
 public:
  /// Reads `manifest.json` and the files it lists. Throws ValidationError
  /// when a checksum does not match; malformed rows become diagnostics.
  static PropertyGraph load_csv(const std::filesystem::path& dir, LoadReport* report = nullptr);
  static PropertyGraph from_graph(graph::Graph g, graph::CsvLayout layout, std::string schema_version);

  const graph::Graph& graph() const noexcept { return graph_; }
  const graph::CsvLayout& layout() const noexcept { return layout_; }
  const std::string& schema_version() const noexcept { return schema_version_; }

  const graph::Node* node(std::string_view id) const;
  /// Ids of a label, ascending.
  const std::vector<std::string>& ids(std::string_view label) const;
  std::vector<std::string> labels() const;

  /// Edges of `type` leaving (Out) or entering (In) `id`, ordered by the id at
  /// the other end. Unknown id throws ValidationError; unknown type is empty.
  std::vector<const graph::Edge*> edges(std::string_view id, std::string_view type, Direction d) const;
  std::vector<const graph::Node*> neighbors(std::string_view id, std::string_view type, Direction d) const;

  /// Jaccard overlap between lowercase query tokens and the tokens of each
  /// node's name/title. Score desc, id asc; zero-overlap nodes never appear.
  /// An empty label searches every label.
  std::vector<TextHit> text_search(std::string_view label, std::string_view query, std::size_t limit) const;

  /// Nodes of `label` that carry an embedding, id ascending.
  const std::vector<const graph::Node*>& vectors(std::string_view label) const;
  std::size_t vector_count() const;

  graph::Manifest emit_csv(const std::filesystem::path& out_dir) const;

 private:
  void index();

  graph::Graph graph_;
  graph::CsvLayout layout_;
  std::string schema_version_;
  std::map<std::string, std::vector<std::string>, std::less<>> by_label_;
  // (node id, type) -> edge indexes
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>, std::less<>> out_, in_;
  std::unordered_map<std::string, std::vector<std::string>> postings_;  // token -> node ids
  std::unordered_map<std::string, std::vector<std::string>> node_tokens_;
  std::map<std::string, std::vector<const graph::Node*>, std::less<>> vectors_;
};

/// Lowercase word tokens of a node's searchable text (name and title).
std::vector<std::string> searchable_tokens(const graph::Node& n);

/// |A ∩ B| / |A ∪ B| over distinct tokens; 0 when both are empty.
double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace climkg::store
