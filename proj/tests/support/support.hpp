#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "climkg/enrich.hpp"
#include "climkg/geo.hpp"

namespace support {

std::filesystem::path fixtures_dir();
std::filesystem::path data_dir();
std::filesystem::path cli_path();
std::filesystem::path config_path();

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& body);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "climkg");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Runs a shell command, returning its exit status; stdout captured into `out` when given.
int run_command(const std::string& cmd, std::string* out = nullptr);

/// In-process CLI invocation; argv[0] is supplied.
int run_cli(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr);

/// Output directory of one `run` over the fixture corpus (harmonized.jsonl,
/// enriched.jsonl, graph/), produced once per process.
const std::filesystem::path& fixture_run_dir();

namespace oracle {

// Gestalt ratio by plain enumeration: every (i, j) start pair is extended as
// far as the strings agree, the longest block wins (earliest i, then j), and
// both sides are recursed.
std::size_t matched_chars(const std::string& a, const std::string& b);
double ratio(const std::string& a, const std::string& b);

std::string normalize(const std::string& description);
bool similar(const climkg::enrich::CesmVariable& a, const climkg::enrich::CesmVariable& b, double tau_d,
             double tau_n);

/// Partition from the transitive closure of the full pair matrix.
std::set<std::set<std::string>> closure_partition(const std::vector<climkg::enrich::CesmVariable>& vars,
                                                  double tau_d, double tau_n);

// Geometry without Boost: rings as lon/lat vertex lists (closed).
using Ring = std::vector<std::pair<double, double>>;
std::vector<Ring> outer_rings(const climkg::geo::Geometry& g);
bool rings_touch(const Ring& a, const Ring& b);

struct Footprint {
  std::set<std::string> countries;
  std::set<std::string> continents;
  std::string scope;
};

/// O(n) scan over every boundary: own bbox test, own segment/point-in-ring contact test.
Footprint linear_scan_classify(const climkg::geo::Geometry* g, const std::vector<climkg::geo::BoundaryEntry>& entries,
                               bool multinational);
std::string scope_table(std::size_t countries, std::size_t continents, bool intersect_empty, bool multinational);

/// Indices ordered by cosine desc, index asc, computed by a full scan.
std::vector<std::size_t> topk_scan(const std::vector<std::vector<float>>& vectors, const std::vector<float>& query,
                                   std::size_t k);

}  // namespace oracle

/// Random probe geometries over the globe: boxes of many sizes, antimeridian
/// boxes and convex polygons, plus a few placed on grid lines.
std::vector<climkg::geo::Geometry> random_probes(std::size_t n, std::uint32_t seed);

/// Synthetic CESM-like variables with families of near-duplicate names and descriptions.
std::vector<climkg::enrich::CesmVariable> synthetic_variables(std::size_t n, std::uint32_t seed);

/// Random unit-ish vectors of dimension 384.
std::vector<std::vector<float>> random_vectors(std::size_t n, std::uint32_t seed);

}  // namespace support
