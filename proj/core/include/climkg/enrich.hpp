#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "climkg/embedding.hpp"
#include "climkg/geo.hpp"
#include "climkg/ingest.hpp"

namespace climkg::enrich {

// ---------------------------------------------------------------------------
// Resolution extraction

enum class MatchKind { None, Attribute, Regex };
std::string_view to_string(MatchKind k);

/// Evidence for one resolution dimension. Sentences are deduplicated in
/// first-seen order and each contains the pattern (or attribute name) that
/// selected it.
struct ResolutionEvidence {
  std::vector<std::string> sentences;
  std::optional<std::string> matched_attribute;
  MatchKind match_kind = MatchKind::None;
};

struct ResolutionInfo {
  ResolutionEvidence spatial;
  ResolutionEvidence temporal;
};

struct ResolutionConfig {
  std::vector<std::string> spatial_attributes;   // 13 shipped
  std::vector<std::string> temporal_attributes;  // 9 shipped
  std::vector<std::string> spatial_patterns;     // ECMAScript, case-insensitive
  std::vector<std::string> temporal_patterns;
  std::vector<std::string> text_fields;          // record attributes scanned by regex

  static ResolutionConfig from_json(const nlohmann::json& j);
  static ResolutionConfig builtin();
};

/// Sentences are maximal spans delimited by ';', newline, or a '.' that is
/// followed by whitespace or ends the text (so "0.5 degree" stays whole).
std::vector<std::string> split_sentences(std::string_view text);

class ResolutionExtractor {
 public:
  explicit ResolutionExtractor(ResolutionConfig config);

  /// Structured attributes first (record fields, extras, and UMM
  /// AdditionalAttributes); regex over text fields only for a dimension whose
  /// attributes did not match.
  ResolutionInfo extract(const ingest::HarmonizedRecord& record) const;

  const ResolutionConfig& config() const noexcept { return config_; }

 private:
  ResolutionEvidence from_text(const ingest::HarmonizedRecord& record, const std::vector<std::regex>& patterns) const;

  ResolutionConfig config_;
  std::vector<std::regex> spatial_;
  std::vector<std::regex> temporal_;
};

ResolutionInfo extract_resolution(const ingest::HarmonizedRecord& record, const ResolutionConfig& config);

nlohmann::json to_json(const ResolutionInfo& info);
ResolutionInfo resolution_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// CESM variable catalog

enum class Component { ATM, OCN, LND, ICE, ROF, GLC, WAV };
inline constexpr Component kAllComponents[] = {Component::ATM, Component::OCN, Component::LND, Component::ICE,
                                               Component::ROF, Component::GLC, Component::WAV};
std::string_view to_string(Component c);
std::string_view long_name(Component c);
Component component_from_string(std::string_view s);

struct CesmVariable {
  std::string name;
  std::string description;
  Component component = Component::ATM;
  std::string units;
};

/// CSV with header `name,description,component,units`. Names must be unique.
std::vector<CesmVariable> parse_cesm_catalog(std::string_view csv_text);
std::vector<CesmVariable> load_cesm_catalog(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Similarity and clustering

/// Lowercases, strips a leading upper-case component code ("ATM:", "OCN "),
/// collapses whitespace and trims surrounding punctuation.
std::string normalize_description(std::string_view text);

/// Characters matched by recursive longest-common-substring decomposition.
/// The longest block is chosen first; ties go to the earliest position in
/// `a`, then in `b`; the recursion then runs on both sides of the block.
std::size_t matching_characters(std::string_view a, std::string_view b);

/// Ratcliff/Obershelp gestalt ratio 2M / (|a| + |b|); 1.0 for two empty strings.
double similarity_ratio(std::string_view a, std::string_view b);

struct SimilarityThresholds {
  double description = 0.7;
  double name = 0.8;
};

/// ratio(normalized descriptions) >= description OR ratio(raw names) >= name.
/// Arguments are put in name order first, so the relation is symmetric.
bool pairwise_similar(const CesmVariable& a, const CesmVariable& b, const SimilarityThresholds& t = {});

struct VariableCluster {
  int cluster_id = 0;
  std::set<std::string> members;
  std::string representative;  // smallest member

  friend bool operator==(const VariableCluster&, const VariableCluster&) = default;
};

/// Connected components of the similarity graph via union-find; ids follow
/// the sorted representatives.
std::vector<VariableCluster> cluster_variables(const std::vector<CesmVariable>& vars,
                                               const SimilarityThresholds& t = {});

/// Components of an arbitrary undirected edge list over `names`.
std::vector<VariableCluster> clusters_from_edges(const std::vector<std::string>& names,
                                                 const std::vector<std::pair<std::string, std::string>>& edges);

// ---------------------------------------------------------------------------
// Evaluation

struct PredictionEval {
  double exact_accuracy = 0.0;
  double group_accuracy = 0.0;
  double error_reduction = 0.0;
  std::size_t unmatched = 0;
  std::size_t total = 0;
};

/// Names missing from every cluster count as their own singleton group.
/// Throws ValidationError listing ids present on one side only.
PredictionEval evaluate_predictions(const std::map<std::string, std::string>& predicted,
                                    const std::map<std::string, std::string>& truth,
                                    const std::vector<VariableCluster>& clusters);

/// Two-column CSV `id,name` with header.
std::map<std::string, std::string> load_prediction_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Text inference

/// Word n-grams for n in [n_min, n_max]: all 2-grams in document order, then
/// all 3-grams, and so on. Words are lowercased whitespace tokens with
/// surrounding punctuation removed.
std::vector<std::string> generate_ngrams(std::string_view text, std::size_t n_min = 2, std::size_t n_max = 9);

/// Distinct n-grams in which some word starts with a vocabulary stem,
/// first-seen order, at most `cap`.
std::vector<std::string> filter_climate_tokens(const std::vector<std::string>& ngrams,
                                               const std::vector<std::string>& vocabulary, std::size_t cap = 20);

/// Shipped stem list.
std::vector<std::string> builtin_vocabulary();
std::vector<std::string> parse_vocabulary(std::string_view text);

// ---------------------------------------------------------------------------
// Variable classification

struct Prediction {
  std::string name;
  double confidence = 0.0;
};

class VariableClassifier {
 public:
  virtual ~VariableClassifier() = default;
  virtual Prediction classify(std::string_view text) = 0;
};

/// Cosine nearest neighbour between the text and every catalog description.
/// Equal scores resolve to the lexicographically smallest name.
class NearestNeighborClassifier final : public VariableClassifier {
 public:
  NearestNeighborClassifier(const std::vector<CesmVariable>& catalog, embed::Embedder& embedder);
  Prediction classify(std::string_view text) override;

  /// Every (name, cosine) pair in name order; for audits and oracles.
  std::vector<Prediction> score_all(std::string_view text);

 private:
  embed::Embedder& embedder_;
  std::vector<std::string> names_;  // sorted
  std::vector<embed::Embedding> vectors_;
};

/// External classifier speaking `{"text": ...}` / `{"name": ..., "confidence": ...}`
/// over a child process. Timeouts and malformed replies fall back to
/// `fallback` for that call and every later one.
class SubprocessClassifier final : public VariableClassifier {
 public:
  SubprocessClassifier(std::string command, std::set<std::string> known_names, VariableClassifier& fallback,
                       std::chrono::milliseconds timeout = std::chrono::seconds(10));
  ~SubprocessClassifier() override;
  Prediction classify(std::string_view text) override;

  bool degraded() const noexcept { return degraded_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::set<std::string> known_;
  VariableClassifier& fallback_;
  std::chrono::milliseconds timeout_;
  bool degraded_ = false;
};

// ---------------------------------------------------------------------------
// Record enrichment

struct CesmLink {
  std::string name;
  double confidence = 0.0;
  std::string evidence;  // token that produced the prediction
};

struct EnrichedRecord {
  ingest::HarmonizedRecord record;
  geo::GeoFootprint footprint;
  ResolutionInfo resolution;
  std::vector<std::string> tokens;
  std::vector<CesmLink> cesm_links;  // sorted by name
};

nlohmann::json to_json(const EnrichedRecord& r);
EnrichedRecord enriched_from_json(const nlohmann::json& j);
void write_jsonl(std::ostream& out, const std::vector<EnrichedRecord>& records);
std::vector<EnrichedRecord> read_enriched_jsonl(std::istream& in);

struct InferenceConfig {
  std::size_t n_min = 2;
  std::size_t n_max = 9;
  std::size_t cap = 20;
  double confidence_threshold = 0.5;
};

/// Text segments fed to n-gram inference: title, abstract, variable fields,
/// then platform and instrument names.
std::vector<std::string> inference_segments(const ingest::HarmonizedRecord& record);

/// Climate tokens of the record, each classified; links are the predictions
/// at or above the threshold, one per variable with its best confidence.
EnrichedRecord enrich_record(const ingest::HarmonizedRecord& record, geo::GeoFootprint footprint,
                             const ResolutionExtractor& resolution, const std::vector<std::string>& vocabulary,
                             VariableClassifier& classifier, const InferenceConfig& config = {});

}  // namespace climkg::enrich
