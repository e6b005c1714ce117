#include "climkg/config.hpp"

#include <fstream>
#include <sstream>

#include "climkg/error.hpp"
#include "climkg/resources.hpp"

namespace climkg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_file(const fs::path& p) {
  try {
    return json::parse(read_text(p));
  } catch (const json::exception& e) {
    throw ValidationError(p.string() + ": " + e.what());
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

}  // namespace

RunConfig RunConfig::from_json(const json& j, const fs::path& base) {
  RunConfig c;
  try {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    if (auto p = j.find("paths"); p != j.end()) {
      auto path = [&](const char* key, std::optional<fs::path>& out) {
        if (auto it = p->find(key); it != p->end() && it->is_string()) {
          fs::path v = it->get<std::string>();
          out = v.is_absolute() ? v : base / v;
        }
      };
      path("schema", c.paths.schema);
      path("enrichment", c.paths.enrichment);
      path("vocabulary", c.paths.vocabulary);
      path("boundaries", c.paths.boundaries);
      path("cesm", c.paths.cesm);
      path("workflows", c.paths.workflows);
      path("link_root", c.paths.link_root);
    }
    if (auto t = j.find("thresholds"); t != j.end()) {
      read(*t, "description", c.similarity.description);
      read(*t, "name", c.similarity.name);
      read(*t, "confidence", c.confidence_threshold);
    }
    if (auto s = j.find("scope"); s != j.end()) read(*s, "multinational", c.scope.multinational);
    if (auto g = j.find("geometry"); g != j.end()) read(*g, "degenerate_buffer_deg", c.geometry.degenerate_buffer_deg);
    if (auto e = j.find("embedding"); e != j.end()) read(*e, "provider", c.embedding_provider);
    if (auto e = j.find("classifier"); e != j.end()) read(*e, "provider", c.classifier_provider);
    if (auto e = j.find("embed"); e != j.end()) read(*e, "cesm_variable", c.embed_cesm_variable);
    if (auto g = j.find("graph"); g != j.end()) {
      std::string similar = "clique";
      read(*g, "similar_edges", similar);
      if (similar == "clique") {
        c.similar_edges = graph::SimilarEdges::Clique;
      } else if (similar == "star") {
        c.similar_edges = graph::SimilarEdges::Star;
      } else {
        throw ValidationError("graph.similar_edges must be clique or star");
      }
      read(*g, "natural_keys", c.natural_keys);
    }
    if (auto d = j.find("discovery"); d != j.end()) read(*d, "spatial_min_score", c.spatial_min_score);
    if (auto a = j.find("acquisition"); a != j.end()) {
      read(*a, "max_bytes", c.acquisition_max_bytes);
      long long secs = c.acquisition_timeout.count();
      read(*a, "timeout_s", secs);
      c.acquisition_timeout = std::chrono::seconds(secs);
    }
    if (auto i = j.find("ingest"); i != j.end()) {
      read(*i, "page_size", c.page_size);
      long long secs = c.ingest_timeout.count();
      read(*i, "timeout_s", secs);
      c.ingest_timeout = std::chrono::seconds(secs);
      read(*i, "retries", c.ingest_retries);
    }
    read(j, "offline", c.offline);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const fs::path& file) {
  auto base = file.has_parent_path() ? file.parent_path() : fs::path(".");
  return from_json(parse_file(file), base);
}

void RunConfig::validate() const {
  auto unit = [](const char* name, double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(name) + " must lie in [0,1]");
  };
  unit("thresholds.description", similarity.description);
  unit("thresholds.name", similarity.name);
  unit("thresholds.confidence", confidence_threshold);
  if (spatial_min_score < -1.0 || spatial_min_score > 1.0) {
    throw ValidationError("discovery.spatial_min_score must lie in [-1,1]");
  }
  if (page_size == 0) throw ValidationError("ingest.page_size must be positive");
  if (geometry.degenerate_buffer_deg < 0) throw ValidationError("geometry.degenerate_buffer_deg must be >= 0");
  for (const auto* p : {&paths.schema, &paths.enrichment, &paths.vocabulary, &paths.boundaries, &paths.cesm,
                        &paths.workflows}) {
    if (*p && !fs::exists(**p)) throw ValidationError("configured file " + (*p)->string() + " does not exist");
  }
  if (paths.link_root && !fs::is_directory(*paths.link_root)) {
    throw ValidationError("link_root " + paths.link_root->string() + " is not a directory");
  }
}

ingest::Schema RunConfig::schema() const {
  return paths.schema ? ingest::Schema::load(*paths.schema) : ingest::Schema::builtin();
}

enrich::ResolutionConfig RunConfig::resolution() const {
  return paths.enrichment ? enrich::ResolutionConfig::from_json(parse_file(*paths.enrichment))
                          : enrich::ResolutionConfig::builtin();
}

enrich::InferenceConfig RunConfig::inference() const {
  enrich::InferenceConfig ic;
  json j = paths.enrichment ? parse_file(*paths.enrichment) : json::parse(resources::get("enrichment.json"));
  if (auto it = j.find("inference"); it != j.end()) {
    read(*it, "n_min", ic.n_min);
    read(*it, "n_max", ic.n_max);
    read(*it, "cap", ic.cap);
  }
  if (ic.n_min == 0 || ic.n_min > ic.n_max) throw ValidationError("inference: need 1 <= n_min <= n_max");
  ic.confidence_threshold = confidence_threshold;
  return ic;
}

std::vector<std::string> RunConfig::vocabulary() const {
  return paths.vocabulary ? enrich::parse_vocabulary(read_text(*paths.vocabulary)) : enrich::builtin_vocabulary();
}

graph::GraphSchema RunConfig::graph_schema() const {
  auto s = graph::GraphSchema::builtin(embed_cesm_variable);
  for (const auto& [label, keys] : natural_keys) s.set_natural_key(label, keys);
  return s;
}

}  // namespace climkg
