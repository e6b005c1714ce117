#include <algorithm>
#include <ctime>
#include <map>
#include <set>

#include "climkg/discovery.hpp"
#include "climkg/text.hpp"

namespace climkg::discovery {

using nlohmann::json;

std::vector<ScoredNode> topk_exact(const std::vector<const graph::Node*>& candidates, std::span<const float> query,
                                   std::size_t k) {
  std::vector<ScoredNode> scored;
  scored.reserve(candidates.size());
  for (const auto* n : candidates) {
    if (n->embedding) scored.push_back({n, embed::cosine(query, n->embedding->values())});
  }
  auto better = [](const ScoredNode& a, const ScoredNode& b) {
    return a.score != b.score ? a.score > b.score : a.node->id < b.node->id;
  };
  k = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(), better);
  scored.resize(k);
  return scored;
}

std::vector<ScoredNode> topk_by_embedding(const store::PropertyGraph& g, std::span<const float> query,
                                          std::string_view label, std::size_t k) {
  auto it = g.layout().nodes.find(std::string(label));
  if (it == g.layout().nodes.end() || !it->second.embedding) {
    throw RoutingError("label " + std::string(label) + " has no embeddings; use text search");
  }
  return topk_exact(g.vectors(label), query, k);
}

std::string_view to_string(Plan p) { return p == Plan::Vector ? "vector" : "text"; }

Plan route_search(std::string_view label, const graph::GraphSchema& schema) {
  const graph::LabelSpec* spec = schema.label(label);
  if (!spec) {
    throw RoutingError("unknown label '" + std::string(label) + "'; expected one of: " +
                       text::join(schema.label_names(), ", "));
  }
  return spec->embedding ? Plan::Vector : Plan::Text;
}

void DiscoveryQuery::validate() const {
  if (k < 1) throw ValidationError("k must be at least 1");
  if (temporal && temporal->kind == TemporalKind::Between && temporal->first > temporal->second) {
    throw ValidationError("between: start after end");
  }
}

json DiscoveryQuery::to_json() const {
  json j{{"text", text}, {"label", node_label}, {"k", k}};
  if (temporal) j["temporal"] = temporal->describe();
  if (spatial_text) j["place"] = *spatial_text;
  if (organization) j["organization"] = *organization;
  return j;
}

json DiscoveryResult::to_json() const {
  return json{{"dataset_id", dataset_id}, {"title", title}, {"score", score}, {"constraints", constraints},
              {"provenance", provenance}};
}

DiscoveryResult DiscoveryResult::from_json(const json& j) {
  DiscoveryResult r;
  r.dataset_id = j.at("dataset_id").get<std::string>();
  r.title = j.value("title", std::string());
  r.score = j.value("score", 0.0);
  r.constraints = j.value("constraints", std::vector<std::string>{});
  r.provenance = j.value("provenance", json::object());
  return r;
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

std::string prop(const graph::Node* n, const char* key) {
  auto it = n->properties.find(key);
  return it != n->properties.end() && it->second.is_string() ? it->second.get<std::string>() : std::string();
}

// Datasets reachable from `hit` through any relationship that ends at its label.
std::vector<const graph::Node*> parent_datasets(const store::PropertyGraph& g, const graph::GraphSchema& schema,
                                                const graph::Node* hit) {
  if (hit->label == "Dataset") return {hit};
  std::vector<const graph::Node*> out;
  for (const auto& e : schema.edges()) {
    if (e.from != "Dataset" || e.to != hit->label) continue;
    for (const auto* n : g.neighbors(hit->id, e.type, store::Direction::In)) out.push_back(n);
  }
  return out;
}

bool organization_matches(const graph::Node* org, const std::string& wanted) {
  auto want = text::word_tokens(wanted);
  if (want.empty()) return false;
  for (const char* key : {"name", "long_name"}) {
    auto have = text::word_tokens(prop(org, key));
    std::set<std::string> hs(have.begin(), have.end());
    if (std::all_of(want.begin(), want.end(), [&](const std::string& t) { return hs.count(t) > 0; })) return true;
  }
  return false;
}

struct Candidate {
  double score = 0.0;
  std::vector<std::string> constraints;
};

}  // namespace

std::vector<DiscoveryResult> multi_criteria_search(const DiscoveryQuery& query, const store::PropertyGraph& g,
                                                   const graph::GraphSchema& schema, embed::Embedder& embedder,
                                                   const SearchOptions& options) {
  query.validate();
  std::map<std::string, Candidate> candidates;
  auto offer = [&](const graph::Node* ds, double score) {
    auto [it, fresh] = candidates.try_emplace(ds->id, Candidate{score, {}});
    if (!fresh) it->second.score = std::max(it->second.score, score);
  };

  // Spatial matches: Location hits traversed back through hasLocation.
  std::optional<std::map<std::string, std::pair<double, std::string>>> spatial;
  if (query.spatial_text) {
    spatial.emplace();
    auto qv = embedder.embed(*query.spatial_text);
    const auto& locations = g.vectors("Location");
    for (const auto& hit : topk_exact(locations, qv.values(), locations.size())) {
      if (hit.score < options.spatial_min_score) break;
      for (const auto* ds : g.neighbors(hit.node->id, "hasLocation", store::Direction::In)) {
        spatial->try_emplace(ds->id, hit.score, prop(hit.node, "name"));
      }
    }
  }

  if (!text::trim(query.text).empty()) {
    std::vector<ScoredNode> hits;
    if (route_search(query.node_label, schema) == Plan::Vector) {
      auto qv = embedder.embed(query.text);
      hits = topk_by_embedding(g, qv.values(), query.node_label, query.k);
    } else {
      for (const auto& h : g.text_search(query.node_label, query.text, query.k)) hits.push_back({h.node, h.score});
    }
    for (const auto& h : hits) {
      for (const auto* ds : parent_datasets(g, schema, h.node)) offer(ds, h.score);
    }
  } else if (spatial) {
    for (const auto& [id, match] : *spatial) offer(g.node(id), match.first);
  } else {
    for (const auto& id : g.ids("Dataset")) offer(g.node(id), 0.0);
  }

  std::vector<DiscoveryResult> out;
  std::string stamp = options.clock ? options.clock() : utc_timestamp();
  for (auto& [id, c] : candidates) {
    if (query.temporal) {
      auto bounds = dataset_bounds(g, id);
      if (!bounds || !temporal_overlap(*bounds, *query.temporal)) continue;
      c.constraints.push_back("temporal:" + query.temporal->describe());
    }
    if (spatial) {
      auto it = spatial->find(id);
      if (it == spatial->end()) continue;
      c.constraints.push_back("spatial:" + it->second.second);
    }
    if (query.organization) {
      const graph::Node* matched = nullptr;
      for (const auto* org : g.neighbors(id, "hasOrganization", store::Direction::Out)) {
        if (organization_matches(org, *query.organization)) {
          matched = org;
          break;
        }
      }
      if (!matched) continue;
      c.constraints.push_back("organization:" + prop(matched, "name"));
    }
    DiscoveryResult r;
    r.dataset_id = id;
    r.title = prop(g.node(id), "title");
    r.score = c.score;
    r.constraints = std::move(c.constraints);
    r.provenance = json{{"query", query.to_json()}, {"timestamp", stamp}};
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const DiscoveryResult& a, const DiscoveryResult& b) {
    return a.score != b.score ? a.score > b.score : a.dataset_id < b.dataset_id;
  });
  return out;
}

std::vector<ResolvedVariable> resolve_cesm_variables(const store::PropertyGraph& g, std::string_view dataset_id) {
  const graph::Node* ds = g.node(dataset_id);
  if (!ds || ds->label != "Dataset") throw ValidationError("unknown dataset " + std::string(dataset_id));
  std::vector<ResolvedVariable> out;
  auto bounds = dataset_bounds(g, dataset_id);
  for (const auto* e : g.edges(dataset_id, "hasCESMVariable", store::Direction::Out)) {
    const graph::Node* v = g.node(e->end);
    ResolvedVariable r;
    r.name = prop(v, "name");
    auto comps = g.neighbors(v->id, "belongsToComponent", store::Direction::Out);
    r.component = comps.empty() ? prop(v, "component") : prop(comps.front(), "name");
    if (auto it = e->properties.find("confidence"); it != e->properties.end()) r.confidence = it->second.get<double>();
    r.bounds = bounds;
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const ResolvedVariable& a, const ResolvedVariable& b) { return a.name < b.name; });
  return out;
}

}  // namespace climkg::discovery
