#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "climkg/http_client.hpp"

namespace climkg::ingest {

using Document = nlohmann::json;

/// One catalog entry as seen through the two endpoint formats. Either side may
/// be missing, never both.
struct RawRecordPair {
  std::string concept_id;
  std::optional<Document> json_doc;  // from collections.json
  std::optional<Document> umm_doc;   // from collections.umm_json
};

/// Throws ValidationError if the pair breaks its invariants.
void validate(const RawRecordPair& pair);

enum class Provenance { Umm, Json };
std::string_view to_string(Provenance p);

struct FieldValue {
  nlohmann::json value;
  Provenance provenance = Provenance::Umm;

  friend bool operator==(const FieldValue&, const FieldValue&) = default;
};

struct HarmonizedRecord {
  std::string concept_id;
  std::map<std::string, FieldValue> fields;  // schema attributes only
  std::map<std::string, FieldValue> extra;   // source keys the schema does not map
  std::string schema_version;

  /// Value of a schema attribute, or nullptr when absent.
  const nlohmann::json* get(std::string_view attribute) const;

  friend bool operator==(const HarmonizedRecord&, const HarmonizedRecord&) = default;
};

nlohmann::json to_json(const HarmonizedRecord& record);
HarmonizedRecord record_from_json(const nlohmann::json& j);

/// One harmonized attribute and where to find it in each source format.
/// Source keys are dotted paths into the document; an empty key means the
/// attribute does not exist in that format.
struct Attribute {
  std::string name;
  std::string umm_key;
  std::string json_key;
};

struct Schema {
  std::string version;
  std::vector<Attribute> attributes;

  static Schema from_json(const nlohmann::json& j);
  static Schema load(const std::filesystem::path& path);
  /// The shipped `schema.json`.
  static Schema builtin();
};

/// Non-empty means present, not null, and not an empty (after trimming)
/// string, array, or object.
bool is_non_empty(const nlohmann::json& value);

/// Field-wise merge preferring the UMM value whenever it is non-empty.
HarmonizedRecord merge_records(const RawRecordPair& pair, const Schema& schema);

struct HarmonizeResult {
  std::vector<HarmonizedRecord> records;  // sorted by concept_id
  std::vector<std::string> warnings;
};

/// Duplicate concept ids collapse last-wins, one warning each.
HarmonizeResult harmonize_corpus(const std::vector<RawRecordPair>& pairs, const Schema& schema);

/// One record per line, keys sorted.
void write_jsonl(std::ostream& out, const std::vector<HarmonizedRecord>& records);
std::vector<HarmonizedRecord> read_jsonl(std::istream& in);

/// Splits one page of each format into per-record pairs, keyed by concept id.
/// Accepts the catalog's feed layout (`feed.entry[].id`) for the JSON format
/// and `items[].{meta.concept-id, umm}` for UMM. Throws ValidationError on a
/// page that has neither layout.
std::vector<RawRecordPair> pair_page(const nlohmann::json* json_page, const nlohmann::json* umm_page);

struct FetchOptions {
  std::string source;             // base collections URL or fixture directory
  std::size_t page_size = 50;
  std::optional<std::string> auth_token;
  bool offline = false;           // forbid network; source must be a directory
  std::chrono::seconds timeout{30};
  int retries = 3;
  std::chrono::milliseconds backoff_base{500};
  std::optional<std::filesystem::path> record_dir;  // write raw page bodies here
  std::size_t max_pages = 0;      // 0 = until exhaustion
};

struct FetchReport {
  std::size_t pages = 0;
  std::size_t pairs = 0;
  std::vector<std::string> skipped;  // "page N: reason"
};

bool is_url(std::string_view source);

/// Streams pairs to `sink` page by page. Fixture directories hold
/// `{page:05}.json` / `{page:05}.umm.json`; URLs are paginated with
/// `page_size`/`page_num`, or the `CMR-Search-After` cursor when the server
/// returns one. Transport failures surviving all retries raise
/// RetryableFetchError carrying the cursor of the failed page; a malformed
/// page is skipped and reported.
FetchReport fetch_dual_format(const FetchOptions& options, http::Client& client,
                              const std::function<void(RawRecordPair&&)>& sink);

}  // namespace climkg::ingest
