#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "climkg/enrich.hpp"
#include "climkg/geo.hpp"
#include "climkg/graph.hpp"

namespace climkg {

/// Settings shared by every pipeline stage. Relative paths in a config file
/// are resolved against the file's directory; command-line flags override.
struct RunConfig {
  struct Paths {
    std::optional<std::filesystem::path> schema;      // default: shipped schema
    std::optional<std::filesystem::path> enrichment;  // default: shipped keyword/regex sets
    std::optional<std::filesystem::path> vocabulary;  // default: shipped stems
    std::optional<std::filesystem::path> boundaries;
    std::optional<std::filesystem::path> cesm;
    std::optional<std::filesystem::path> workflows;
    std::optional<std::filesystem::path> link_root;
  } paths;

  enrich::SimilarityThresholds similarity;
  double confidence_threshold = 0.5;
  geo::ScopeOptions scope;
  geo::GeometryOptions geometry;
  std::string embedding_provider = "hash";
  std::string classifier_provider = "baseline";  // or subprocess:<cmd>
  bool embed_cesm_variable = false;
  graph::SimilarEdges similar_edges = graph::SimilarEdges::Clique;
  std::map<std::string, std::vector<std::string>> natural_keys;
  double spatial_min_score = 0.25;
  std::size_t acquisition_max_bytes = 256ull * 1024 * 1024;
  std::chrono::seconds acquisition_timeout{60};
  std::size_t page_size = 50;
  std::chrono::seconds ingest_timeout{30};
  int ingest_retries = 3;
  bool offline = false;

  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& file);

  /// Thresholds in [0,1] and every configured file present; throws ValidationError.
  void validate() const;

  ingest::Schema schema() const;
  enrich::ResolutionConfig resolution() const;
  enrich::InferenceConfig inference() const;
  std::vector<std::string> vocabulary() const;
  graph::GraphSchema graph_schema() const;
};

}  // namespace climkg
