#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "climkg/http_client.hpp"
#include "climkg/store.hpp"

namespace climkg::acquisition {

struct LinkRef {
  std::string url;
  std::string kind;

  friend bool operator==(const LinkRef&, const LinkRef&) = default;
};

/// True for kinds that point at the data itself rather than documentation.
bool is_direct_download(std::string_view kind);

/// Every hasLink target of the dataset: direct-download kinds first, then by URL.
std::vector<LinkRef> extract_links(const store::PropertyGraph& g, std::string_view dataset_id);

enum class Status { Discovered, Retrieved, Preprocessed, Analyzed, Failed };
std::string_view to_string(Status s);

enum class Action { Retrieve, Preprocess, Analyze };
std::string_view to_string(Action a);

struct Validation {
  bool link_valid = false;
  bool accessible = false;
  bool structure = false;

  bool passed() const noexcept { return link_valid && accessible && structure; }
  nlohmann::json to_json() const;
};

struct AcquisitionState {
  std::string dataset_id;
  std::vector<LinkRef> links;
  std::optional<std::string> source_url;  // link the raw artifact came from
  std::optional<std::filesystem::path> raw_path;
  std::string format;  // csv | json | netcdf | hdf | unknown
  std::optional<std::filesystem::path> normalized_path;
  std::optional<std::filesystem::path> summary_path;
  Status status = Status::Discovered;
  std::optional<Validation> validation;
  std::vector<std::string> diagnostics;

  nlohmann::json to_json() const;
};

/// raw missing -> retrieve; normalized missing -> preprocess; else analyze.
/// A failed state throws ValidationError asking for a reset.
Action decide_action(const AcquisitionState& state);

struct AcquisitionOptions {
  std::filesystem::path out_dir;    // holds <dataset_id>/
  std::filesystem::path link_root;  // base for relative file: links
  std::chrono::seconds timeout{60};
  std::size_t max_bytes = 256ull * 1024 * 1024;
  std::optional<std::string> bearer_token;
  bool offline = false;  // http(s) links count as inaccessible
};

/// Local path of a file: link, relative ones resolved against `root`.
std::optional<std::filesystem::path> file_link_path(std::string_view url, const std::filesystem::path& root);
bool link_syntax_valid(std::string_view url);

/// Magic bytes first (`CDF\x01`/`CDF\x02`, `\x89HDF`), then the extension,
/// then a content sniff for JSON/CSV.
std::string detect_format(std::string_view bytes, std::string_view name);

/// Downloads the first accessible link to `raw/<sha256 prefix>.<ext>`.
AcquisitionState retrieve(AcquisitionState state, http::Client& client, const AcquisitionOptions& options);

/// Canonical CSV of a CSV input: every row re-quoted minimally, LF endings.
/// Throws ValidationError naming the first ragged row.
std::string normalize_csv(std::string_view text);
/// Arrays of objects flattened one level (`a.b` columns), columns in
/// first-seen order.
std::string normalize_json(std::string_view text);

/// Writes `norm.csv`; unsupported formats fail the state.
AcquisitionState normalize(AcquisitionState state, const AcquisitionOptions& options);

/// Link syntax, fetch success (or HEAD < 400 when `check_only`), and a
/// normalized table with a header, at least one row and uniform width.
Validation validate(const AcquisitionState& state, http::Client* client = nullptr, bool check_only = false,
                    const AcquisitionOptions& options = {});

struct ColumnStats {
  std::string name;
  std::size_t count = 0;
  double min = 0, max = 0, mean = 0;
  std::optional<double> slope;  // per decimal year of the time column
};

struct Summary {
  std::size_t rows = 0;
  std::optional<std::string> time_column;
  std::vector<ColumnStats> columns;

  nlohmann::json to_json() const;
};

/// Least-squares slope of y on x; nullopt for fewer than two distinct x.
std::optional<double> ols_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Statistics over a canonical table.
Summary summarize_table(std::string_view csv_text);

/// Requires a passed validation. Writes `summary.json` and `plot.csv`.
AcquisitionState analyze(AcquisitionState state, const AcquisitionOptions& options);

/// decide_action loop from a fresh state until analyzed or failed.
AcquisitionState run_pipeline(const store::PropertyGraph& g, std::string_view dataset_id, http::Client& client,
                              const AcquisitionOptions& options);

}  // namespace climkg::acquisition
