#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "climkg/dates.hpp"
#include "climkg/embedding.hpp"
#include "climkg/error.hpp"
#include "climkg/store.hpp"

namespace climkg::discovery {

/// The label cannot be searched the requested way.
class RoutingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct ScoredNode {
  const graph::Node* node = nullptr;
  double score = 0.0;
};

/// Exact top-k by cosine over `candidates` (nodes with embeddings); score
/// desc, id asc.
std::vector<ScoredNode> topk_exact(const std::vector<const graph::Node*>& candidates, std::span<const float> query,
                                   std::size_t k);

/// Throws RoutingError when `label` carries no embeddings.
std::vector<ScoredNode> topk_by_embedding(const store::PropertyGraph& g, std::span<const float> query,
                                          std::string_view label, std::size_t k);

enum class Plan { Vector, Text };
std::string_view to_string(Plan p);

/// Vector iff the label is embedding-enabled in `schema`. Unknown labels
/// throw RoutingError listing the vocabulary.
Plan route_search(std::string_view label, const graph::GraphSchema& schema);

// ---------------------------------------------------------------------------
// Temporal logic

struct Interval {
  dates::Day start;
  std::optional<dates::Day> end;  // open-ended when absent
};

enum class TemporalKind { After, Before, Between };

struct TemporalConstraint {
  TemporalKind kind = TemporalKind::After;
  dates::Day first;
  dates::Day second;  // Between only

  std::string describe() const;
};

TemporalConstraint after(dates::Day t);
TemporalConstraint before(dates::Day t);
/// Throws ValidationError when a > b.
TemporalConstraint between(dates::Day a, dates::Day b);

/// after t: end >= t; before t: start <= t; between [a,b]: start <= b and end >= a.
bool temporal_overlap(const Interval& bounds, const TemporalConstraint& c);

/// Hull of the dataset's TemporalExtent nodes; nullopt when it has none.
/// An unparseable bound throws ValidationError naming the node and field.
std::optional<Interval> dataset_bounds(const store::PropertyGraph& g, std::string_view dataset_id);

// ---------------------------------------------------------------------------
// Multi-criteria search

struct DiscoveryQuery {
  std::string text;
  std::string node_label = "DataCategory";
  std::size_t k = 10;
  std::optional<TemporalConstraint> temporal;
  std::optional<std::string> spatial_text;
  std::optional<std::string> organization;

  void validate() const;
  nlohmann::json to_json() const;
};

struct DiscoveryResult {
  std::string dataset_id;
  std::string title;
  double score = 0.0;
  std::vector<std::string> constraints;
  nlohmann::json provenance;

  nlohmann::json to_json() const;
  static DiscoveryResult from_json(const nlohmann::json& j);
};

struct SearchOptions {
  /// Location nodes at or above this cosine count as spatial matches.
  double spatial_min_score = 0.25;
  /// Timestamp source for provenance; UTC ISO-8601 by default.
  std::function<std::string()> clock;
};

std::string utc_timestamp();

/// Primary routed search projected to datasets (reverse traversal from the
/// matched nodes), then temporal, spatial and organization filters. With no
/// query text the spatial match, when given, is the primary search;
/// otherwise every dataset is a candidate with score 0.
std::vector<DiscoveryResult> multi_criteria_search(const DiscoveryQuery& query, const store::PropertyGraph& g,
                                                   const graph::GraphSchema& schema, embed::Embedder& embedder,
                                                   const SearchOptions& options = {});

struct ResolvedVariable {
  std::string name;
  std::string component;
  double confidence = 0.0;
  std::optional<Interval> bounds;
};

/// hasCESMVariable then belongsToComponent, with the dataset's temporal hull.
std::vector<ResolvedVariable> resolve_cesm_variables(const store::PropertyGraph& g, std::string_view dataset_id);

// ---------------------------------------------------------------------------
// Persistent cache

/// Single-file SQLite store of search results keyed by (query text, dataset
/// id). A file that is not a readable database is moved aside to
/// `<path>.corrupt` and replaced by an empty store.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path path);
  ~ResultCache();
  ResultCache(const ResultCache&) = delete;
  ResultCache& operator=(const ResultCache&) = delete;

  /// Appends results; rows already stored for the same query and dataset are kept.
  void persist(std::string_view query_text, const std::vector<DiscoveryResult>& results);
  /// Newest first.
  std::vector<DiscoveryResult> recall(std::string_view query_text) const;

  /// Set when the constructor had to rebuild a corrupt file.
  const std::optional<std::filesystem::path>& backup() const noexcept { return backup_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::optional<std::filesystem::path> backup_;
};

}  // namespace climkg::discovery
