#include "support.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cli.hpp"

namespace support {

namespace fs = std::filesystem;

fs::path fixtures_dir() { return CLIMKG_FIXTURES_DIR; }
fs::path data_dir() { return CLIMKG_TEST_DATA_DIR; }
fs::path cli_path() { return CLIMKG_CLI_PATH; }
fs::path config_path() { return CLIMKG_CONFIG_PATH; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& body) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << body;
}

TempDir::TempDir(const std::string& tag) {
  std::string templ = (fs::temp_directory_path() / (tag + "-XXXXXX")).string();
  std::vector<char> buf(templ.begin(), templ.end());
  buf.push_back('\0');
  if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
  path_ = buf.data();
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

int run_command(const std::string& cmd, std::string* out) {
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return -1;
  std::array<char, 4096> buf{};
  std::string captured;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) captured.append(buf.data(), n);
  int status = pclose(p);
  if (out) *out = std::move(captured);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_cli(const std::vector<std::string>& args, std::string* out, std::string* err) {
  std::vector<const char*> argv{"climkg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  int rc = climkg::cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return rc;
}

const fs::path& fixture_run_dir() {
  static TempDir dir("climkg-run");
  static const bool done = [] {
    std::string err;
    int rc = run_cli({"--config", config_path().string(), "run", "--source", (fixtures_dir() / "catalog").string(),
                      "--out", dir.path().string()},
                     nullptr, &err);
    if (rc != 0) throw std::runtime_error("fixture pipeline failed: " + err);
    return true;
  }();
  (void)done;
  return dir.path();
}

namespace oracle {

namespace {

std::size_t matched_range(const std::string& a, std::size_t alo, std::size_t ahi, const std::string& b,
                          std::size_t blo, std::size_t bhi) {
  std::size_t best = 0, bi = 0, bj = 0;
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      std::size_t k = 0;
      while (i + k < ahi && j + k < bhi && a[i + k] == b[j + k]) ++k;
      if (k > best) {
        best = k;
        bi = i;
        bj = j;
      }
    }
  }
  if (best == 0) return 0;
  return best + matched_range(a, alo, bi, b, blo, bj) + matched_range(a, bi + best, ahi, b, bj + best, bhi);
}

}  // namespace

std::size_t matched_chars(const std::string& a, const std::string& b) {
  return matched_range(a, 0, a.size(), b, 0, b.size());
}

double ratio(const std::string& a, const std::string& b) {
  if (a.empty() && b.empty()) return 1.0;
  return 2.0 * static_cast<double>(matched_chars(a, b)) / static_cast<double>(a.size() + b.size());
}

std::string normalize(const std::string& d) {
  static const std::set<std::string> codes = {"ATM", "OCN", "LND", "ICE", "ROF", "GLC", "WAV"};
  std::string s = d;
  auto first = s.find_first_not_of(" \t\n\r");
  s = first == std::string::npos ? "" : s.substr(first);
  for (const auto& c : codes) {
    if (s.size() > c.size() && s.compare(0, c.size(), c) == 0) {
      char sep = s[c.size()];
      if (sep == ':' || sep == '-' || sep == ' ' || sep == '\t') s = s.substr(c.size() + 1);
      break;
    }
  }
  std::string out;
  bool space = false;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  auto junk = [](char c) { return c == ' ' || std::ispunct(static_cast<unsigned char>(c)); };
  while (!out.empty() && junk(out.front())) out.erase(out.begin());
  while (!out.empty() && junk(out.back())) out.pop_back();
  return out;
}

bool similar(const climkg::enrich::CesmVariable& a, const climkg::enrich::CesmVariable& b, double tau_d,
             double tau_n) {
  const auto& x = a.name < b.name ? a : b;
  const auto& y = a.name < b.name ? b : a;
  return ratio(normalize(x.description), normalize(y.description)) >= tau_d || ratio(x.name, y.name) >= tau_n;
}

std::set<std::set<std::string>> closure_partition(const std::vector<climkg::enrich::CesmVariable>& vars,
                                                  double tau_d, double tau_n) {
  const std::size_t n = vars.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = 1;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (similar(vars[i], vars[j], tau_d, tau_n)) reach[i][j] = reach[j][i] = 1;
    }
  }
  // Warshall.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = 1;
      }
    }
  }
  std::set<std::set<std::string>> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::string> group;
    for (std::size_t j = 0; j < n; ++j) {
      if (reach[i][j]) group.insert(vars[j].name);
    }
    out.insert(group);
  }
  return out;
}

std::vector<Ring> outer_rings(const climkg::geo::Geometry& g) {
  std::vector<Ring> out;
  for (const auto& poly : g.parts) {
    Ring r;
    for (const auto& p : poly.outer()) r.emplace_back(p.x(), p.y());
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

using P = std::pair<double, double>;

long double orient(const P& a, const P& b, const P& c) {
  return (static_cast<long double>(b.first) - a.first) * (static_cast<long double>(c.second) - a.second) -
         (static_cast<long double>(b.second) - a.second) * (static_cast<long double>(c.first) - a.first);
}

bool on_segment(const P& a, const P& b, const P& p) {
  return std::min(a.first, b.first) <= p.first && p.first <= std::max(a.first, b.first) &&
         std::min(a.second, b.second) <= p.second && p.second <= std::max(a.second, b.second);
}

int sign(long double v) { return (v > 0) - (v < 0); }

bool segments_meet(const P& a, const P& b, const P& c, const P& d) {
  int o1 = sign(orient(a, b, c)), o2 = sign(orient(a, b, d));
  int o3 = sign(orient(c, d, a)), o4 = sign(orient(c, d, b));
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool inside(const Ring& r, const P& p) {
  bool in = false;
  for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) {
    const auto& a = r[i];
    const auto& b = r[j];
    if ((a.second > p.second) != (b.second > p.second)) {
      double x = a.first + (p.second - a.second) * (b.first - a.first) / (b.second - a.second);
      if (p.first < x) in = !in;
    }
  }
  return in;
}

struct BBox {
  double x0 = 1e9, y0 = 1e9, x1 = -1e9, y1 = -1e9;
};

BBox bbox_of(const std::vector<Ring>& rings) {
  BBox b;
  for (const auto& r : rings) {
    for (const auto& [x, y] : r) {
      b.x0 = std::min(b.x0, x);
      b.y0 = std::min(b.y0, y);
      b.x1 = std::max(b.x1, x);
      b.y1 = std::max(b.y1, y);
    }
  }
  return b;
}

bool bbox_meet(const BBox& a, const BBox& b) { return a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1; }

}  // namespace

bool rings_touch(const Ring& a, const Ring& b) {
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      if (segments_meet(a[i], a[i + 1], b[j], b[j + 1])) return true;
    }
  }
  return inside(b, a.front()) || inside(a, b.front());
}

std::string scope_table(std::size_t countries, std::size_t continents, bool intersect_empty, bool multinational) {
  if (intersect_empty || countries == 0) return "ocean";
  if (continents > 1) return "global";
  if (countries == 1) return "country";
  if (countries <= 3) return "regional";
  return multinational ? "multinational" : "continental";
}

Footprint linear_scan_classify(const climkg::geo::Geometry* g, const std::vector<climkg::geo::BoundaryEntry>& entries,
                               bool multinational) {
  Footprint f;
  if (!g || g->parts.empty()) {
    f.scope = "unclassified";
    return f;
  }
  auto probe = outer_rings(*g);
  auto pb = bbox_of(probe);
  for (const auto& e : entries) {
    auto rings = outer_rings(e.geometry);
    if (!bbox_meet(pb, bbox_of(rings))) continue;
    bool hit = false;
    for (const auto& pr : probe) {
      for (const auto& er : rings) {
        if (rings_touch(pr, er)) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    if (hit) {
      f.countries.insert(e.name);
      f.continents.insert(e.continent);
    }
  }
  f.scope = scope_table(f.countries.size(), f.continents.size(), f.countries.empty(), multinational);
  return f;
}

std::vector<std::size_t> topk_scan(const std::vector<std::vector<float>>& vectors, const std::vector<float>& query,
                                   std::size_t k) {
  std::vector<std::pair<double, std::size_t>> scored;
  double qn = 0;
  for (float q : query) qn += static_cast<double>(q) * q;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    double dot = 0, vn = 0;
    for (std::size_t d = 0; d < query.size(); ++d) {
      dot += static_cast<double>(vectors[i][d]) * query[d];
      vn += static_cast<double>(vectors[i][d]) * vectors[i][d];
    }
    double c = (vn == 0 || qn == 0) ? 0.0 : dot / (std::sqrt(vn) * std::sqrt(qn));
    scored.emplace_back(c, i);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(k, scored.size()); ++i) out.push_back(scored[i].second);
  return out;
}

}  // namespace oracle

std::vector<climkg::geo::Geometry> random_probes(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> lon(-180.0, 180.0), lat(-90.0, 90.0), unit(0.0, 1.0);
  std::vector<climkg::geo::Geometry> out;
  // Fixed cases first: whole globe, open Pacific, a box on a shared cell edge,
  // one straddling the US/Canada edge at lat 49, and one in a cell-corner gap.
  out.push_back(climkg::geo::bbox_to_polygon(-90, -180, 90, 180));
  out.push_back(climkg::geo::bbox_to_polygon(-30, -160, -10, -120));
  out.push_back(climkg::geo::bbox_to_polygon(40, -80, 45, -75));
  out.push_back(climkg::geo::bbox_to_polygon(47, -75, 51, -70));
  out.push_back(climkg::geo::bbox_to_polygon(48.6, -65.4, 49.4, -64.6));
  while (out.size() < n) {
    double kind = unit(rng);
    if (kind < 0.5) {
      double size = std::pow(10.0, -0.5 + 2.5 * unit(rng));  // ~0.3 .. 100 degrees
      double s = std::clamp(lat(rng), -90.0, 90.0 - 0.1);
      double w = lon(rng);
      double nn = std::min(90.0, s + size * (0.3 + unit(rng)));
      double e = std::min(180.0, w + size * (0.3 + unit(rng)));
      out.push_back(climkg::geo::bbox_to_polygon(s, w, nn, e));
    } else if (kind < 0.6) {
      double s = lat(rng) * 0.8;
      double w = 150.0 + 29.0 * unit(rng);
      double e = -179.0 + 29.0 * unit(rng);
      out.push_back(climkg::geo::bbox_to_polygon(s, w, std::min(90.0, s + 2 + 20 * unit(rng)), e));
    } else {
      // Convex polygon: points on an ellipse around a centre, sorted by angle.
      double cx = -170 + 340 * unit(rng), cy = -80 + 160 * unit(rng);
      double rx = 0.5 + 15 * unit(rng), ry = 0.5 + 8 * unit(rng);
      int k = 3 + static_cast<int>(unit(rng) * 6);
      std::vector<double> angles;
      for (int i = 0; i < k; ++i) angles.push_back(unit(rng) * 2 * M_PI);
      std::sort(angles.begin(), angles.end());
      std::vector<double> coords;
      for (double a : angles) {
        coords.push_back(std::clamp(cy + ry * std::sin(a), -90.0, 90.0));
        coords.push_back(std::clamp(cx + rx * std::cos(a), -180.0, 180.0));
      }
      try {
        auto g = climkg::geo::parse_polygon_coords(coords);
        if (auto v = climkg::geo::extract_valid_geometry(g); v && v->area() > 1e-6) out.push_back(*v);
      } catch (const std::exception&) {
        // Degenerate draw; try again.
      }
    }
  }
  return out;
}

std::vector<climkg::enrich::CesmVariable> synthetic_variables(std::size_t n, std::uint32_t seed) {
  static const std::vector<std::string> stems = {"TREF", "PREC", "SST", "SOILW", "SNOW", "CLD", "FLN", "QRUN",
                                                 "ICEF", "TAU", "HMXL", "GPP"};
  static const std::vector<std::string> subjects = {
      "reference height temperature", "precipitation rate", "sea surface temperature", "soil water content",
      "snow depth",                   "cloud fraction",     "net longwave flux",       "surface runoff",
      "sea ice fraction",             "surface stress",     "mixed layer depth",       "gross primary production"};
  static const std::vector<std::string> qualifiers = {"",          "maximum ", "minimum ", "daily mean ",
                                                      "convective ", "total ",  "upper ", "zonal "};
  static const std::vector<std::string> comps = {"ATM", "OCN", "LND", "ICE", "ROF", "GLC", "WAV"};
  std::mt19937 rng(seed);
  std::vector<climkg::enrich::CesmVariable> out;
  std::set<std::string> seen;
  while (out.size() < n) {
    std::size_t f = rng() % stems.size();
    std::string name = stems[f];
    int suffix = static_cast<int>(rng() % 6);
    static const char* tails[] = {"", "MX", "MN", "T", "_10CM", "DAY"};
    name += tails[suffix];
    if (rng() % 3 == 0) name += std::to_string(rng() % 90 + 10);
    if (!seen.insert(name).second) continue;
    std::string desc = qualifiers[rng() % qualifiers.size()] + subjects[(f + (rng() % 4 == 0 ? 1 : 0)) % subjects.size()];
    if (rng() % 4 == 0) desc = comps[rng() % comps.size()] + ": " + desc;
    if (rng() % 5 == 0) desc[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(desc[0])));
    out.push_back({name, desc, climkg::enrich::kAllComponents[rng() % 7], "1"});
  }
  return out;
}

std::vector<std::vector<float>> random_vectors(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<float> d(0.0f, 1.0f);
  std::vector<std::vector<float>> out(n, std::vector<float>(384));
  for (auto& v : out) {
    for (auto& x : v) x = d(rng);
  }
  return out;
}

}  // namespace support
