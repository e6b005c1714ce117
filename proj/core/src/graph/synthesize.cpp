#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>

#include "climkg/error.hpp"
#include "climkg/graph.hpp"
#include "climkg/hashing.hpp"
#include "climkg/text.hpp"
#include "record_view.hpp"

namespace climkg::graph {

using nlohmann::json;

std::vector<WorkflowSeed> parse_workflows(const json& j) {
  if (!j.is_array()) throw ValidationError("workflows: expected a JSON array");
  auto schema = GraphSchema::builtin();
  std::vector<WorkflowSeed> out;
  for (const auto& w : j) {
    WorkflowSeed s;
    try {
      s.label = w.at("label").get<std::string>();
      s.name = w.at("name").get<std::string>();
      s.description = w.value("description", std::string());
    } catch (const json::exception& e) {
      throw ValidationError(std::string("workflows: ") + e.what());
    }
    const LabelSpec* spec = schema.label(s.label);
    if (!spec || !spec->workflow) throw ValidationError("workflows: '" + s.label + "' is not a workflow class");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<WorkflowSeed> load_workflows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read workflows " + path.string());
  try {
    return parse_workflows(json::parse(in));
  } catch (const json::exception& e) {
    throw ValidationError("workflows " + path.string() + ": " + e.what());
  }
}

std::string embedding_text(const Node& n) {
  auto get = [&](const char* key) -> std::string {
    auto it = n.properties.find(key);
    return it != n.properties.end() && it->second.is_string() ? it->second.get<std::string>() : std::string();
  };
  if (n.label == "SpatialResolution" || n.label == "TemporalResolution") return get("text");
  if (n.label == "CESMVariable") return get("description").empty() ? get("name") : get("description");
  std::string s = get("name");
  for (const char* extra : {"long_name", "description"}) {
    auto e = get(extra);
    if (!e.empty()) s += (s.empty() ? "" : " ") + e;
  }
  if (s.empty()) s = get("title");
  return s;
}

namespace {

std::string key_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::vector<std::string> parts;
    for (const auto& x : v) parts.push_back(x.is_string() ? x.get<std::string>() : x.dump());
    return join_array(parts);
  }
  if (v.is_null()) return {};
  return v.dump();
}

void set(Properties& p, const std::string& key, std::string value) {
  auto t = text::trim(value);
  if (!t.empty()) p[key] = std::string(t);
}

void set(Properties& p, const std::string& key, const std::vector<std::string>& values) {
  if (!values.empty()) p[key] = values;
}

class Builder {
 public:
  Builder(const GraphSchema& schema, const BuildOptions& options) : schema_(schema), options_(options) {}

  std::optional<std::string> node(const std::string& label, Properties props) {
    const LabelSpec* spec = schema_.label(label);
    if (!spec) throw ValidationError("unknown node label " + label);
    std::map<std::string, std::string> key;
    for (const auto& k : spec->natural_key) {
      auto it = props.find(k);
      key[k] = it == props.end() ? std::string() : key_value(it->second);
    }
    std::string id;
    try {
      id = node_id(options_.schema_version, label, key);
    } catch (const ValidationError&) {
      diagnostics_.push_back(label + ": node without natural key skipped");
      return std::nullopt;
    }
    auto [it, fresh] = graph_.nodes.try_emplace(id);
    Node& n = it->second;
    if (fresh) {
      n.id = id;
      n.label = label;
      n.properties = std::move(props);
    } else {
      if (n.label != label) diagnostics_.push_back("id collision between " + n.label + " and " + label + ": " + id);
      for (auto& [k, v] : props) n.properties.try_emplace(k, std::move(v));
    }
    return id;
  }

  void edge(const std::string& type, const std::optional<std::string>& start, const std::optional<std::string>& end,
            Properties props = {}) {
    if (!start || !end) {
      diagnostics_.push_back(type + ": edge with missing endpoint dropped");
      return;
    }
    pending_.push_back(Edge{*start, *end, type, std::move(props)});
  }

  void dangling(const std::string& what) { diagnostics_.push_back(what); }

  std::optional<std::string> find(const std::string& label, const std::map<std::string, std::string>& key) const {
    try {
      auto id = node_id(options_.schema_version, label, key);
      if (graph_.nodes.count(id)) return id;
    } catch (const ValidationError&) {
    }
    return std::nullopt;
  }

  BuildResult finish(embed::Embedder& embedder) {
    for (auto& e : pending_) {
      const EdgeSpec* spec = schema_.edge(e.type);
      auto s = graph_.nodes.find(e.start), t = graph_.nodes.find(e.end);
      if (!spec) {
        diagnostics_.push_back("unknown edge type " + e.type + " dropped");
      } else if (s == graph_.nodes.end() || t == graph_.nodes.end()) {
        diagnostics_.push_back(e.type + ": dangling endpoint " + e.start + " -> " + e.end + " dropped");
      } else if (s->second.label != spec->from || t->second.label != spec->to) {
        diagnostics_.push_back(e.type + ": illegal triple " + s->second.label + " -> " + t->second.label);
      } else {
        graph_.edges.push_back(std::move(e));
      }
    }
    auto order = [](const Edge& a, const Edge& b) {
      return std::tie(a.type, a.start, a.end) < std::tie(b.type, b.start, b.end);
    };
    std::sort(graph_.edges.begin(), graph_.edges.end(), order);
    std::vector<Edge> unique;
    for (auto& e : graph_.edges) {
      if (!unique.empty() && unique.back().type == e.type && unique.back().start == e.start &&
          unique.back().end == e.end) {
        auto& kept = unique.back().properties;
        auto c = e.properties.find("confidence");
        auto k = kept.find("confidence");
        if (c != e.properties.end() && (k == kept.end() || c->second.get<double>() > k->second.get<double>())) {
          kept["confidence"] = c->second;
        }
        continue;
      }
      unique.push_back(std::move(e));
    }
    graph_.edges = std::move(unique);

    std::vector<Node*> targets;
    std::vector<std::string> texts;
    for (auto& [_, n] : graph_.nodes) {
      if (!schema_.embedding_enabled(n.label)) continue;
      targets.push_back(&n);
      texts.push_back(embedding_text(n));
    }
    auto vectors = embedder.embed_batch(texts);
    for (std::size_t i = 0; i < targets.size(); ++i) targets[i]->embedding = std::move(vectors[i]);
    return BuildResult{std::move(graph_), std::move(diagnostics_)};
  }

 private:
  const GraphSchema& schema_;
  const BuildOptions& options_;
  Graph graph_;
  std::vector<Edge> pending_;
  std::vector<std::string> diagnostics_;
};

std::string location_name(const detail::RecordView& v, const geo::GeoFootprint& f) {
  if (!v.location_names.empty()) return text::join(v.location_names, "; ");
  if (!f.countries.empty()) return text::join(std::vector<std::string>(f.countries.begin(), f.countries.end()), ", ");
  if (f.geometry) return std::string(geo::to_string(f.scope));
  return {};
}

Properties confidence(double c) { return Properties{{"confidence", c}}; }

}  // namespace

BuildResult build_graph(const BuildInputs& in, const GraphSchema& schema, const BuildOptions& options,
                        embed::Embedder& embedder) {
  Builder b(schema, options);

  std::vector<enrich::VariableCluster> computed;
  const std::vector<enrich::VariableCluster>* clusters = in.clusters;
  // Catalog names are case-sensitive (OCN UVEL vs ICE uvel); look them up exactly.
  std::map<std::string, std::string> cesm_ids;
  auto cesm_id = [&](const std::string& name) -> std::optional<std::string> {
    auto it = cesm_ids.find(name);
    if (it == cesm_ids.end()) return std::nullopt;
    return it->second;
  };
  if (in.catalog) {
    if (!clusters) {
      computed = enrich::cluster_variables(*in.catalog);
      clusters = &computed;
    }
    std::map<std::string, int> cluster_of;
    for (const auto& c : *clusters) {
      for (const auto& m : c.members) cluster_of[m] = c.cluster_id;
    }
    std::map<std::string, std::optional<std::string>> component_ids;
    for (auto c : enrich::kAllComponents) {
      Properties p;
      set(p, "name", std::string(enrich::to_string(c)));
      set(p, "long_name", std::string(enrich::long_name(c)));
      component_ids[std::string(enrich::to_string(c))] = b.node("Component", std::move(p));
    }
    for (const auto& v : *in.catalog) {
      Properties p;
      set(p, "name", v.name);
      set(p, "description", v.description);
      set(p, "component", std::string(enrich::to_string(v.component)));
      set(p, "units", v.units);
      if (auto it = cluster_of.find(v.name); it != cluster_of.end()) p["cluster"] = it->second;
      auto id = b.node("CESMVariable", std::move(p));
      if (id) cesm_ids.emplace(v.name, *id);
      b.edge("belongsToComponent", id, component_ids[std::string(enrich::to_string(v.component))]);
    }
    const auto& var_id = cesm_id;
    for (const auto& c : *clusters) {
      std::vector<std::string> members(c.members.begin(), c.members.end());
      if (options.similar_edges == SimilarEdges::Star) {
        for (const auto& m : members) {
          if (m != c.representative) b.edge("similarCESMVariables", var_id(c.representative), var_id(m));
        }
      } else {
        for (std::size_t i = 0; i < members.size(); ++i) {
          for (std::size_t j = i + 1; j < members.size(); ++j) {
            b.edge("similarCESMVariables", var_id(members[i]), var_id(members[j]));
          }
        }
      }
    }
  }

  if (in.workflows) {
    for (const auto& w : *in.workflows) {
      Properties p;
      set(p, "name", w.name);
      set(p, "description", w.description);
      b.node(w.label, std::move(p));
    }
  }

  std::map<std::string, std::optional<enrich::Prediction>> keyword_cache;
  if (in.records) {
    for (const auto& er : *in.records) {
      const auto& rec = er.record;
      if (text::trim(rec.concept_id).empty()) {
        b.dangling("record without concept_id skipped");
        continue;
      }
      auto v = detail::view_record(rec);
      const auto& fp = er.footprint;

      Properties dp;
      set(dp, "concept_id", rec.concept_id);
      set(dp, "short_name", v.short_name);
      set(dp, "version", v.version);
      set(dp, "title", v.title);
      set(dp, "abstract", v.abstract);
      set(dp, "doi", v.doi);
      set(dp, "scope", std::string(geo::to_string(fp.scope)));
      set(dp, "countries", std::vector<std::string>(fp.countries.begin(), fp.countries.end()));
      set(dp, "continents", std::vector<std::string>(fp.continents.begin(), fp.continents.end()));
      set(dp, "tokens", er.tokens);
      auto ds = b.node("Dataset", std::move(dp));
      if (!ds) continue;

      for (const auto& c : v.categories) b.edge("hasDataCategory", ds, b.node("DataCategory", {{"name", c}}));
      for (const auto& f : v.formats) b.edge("hasDataFormat", ds, b.node("DataFormat", {{"name", f}}));
      if (!v.coordinate_system.empty()) {
        b.edge("usesCoordinateSystem", ds, b.node("CoordinateSystem", {{"name", v.coordinate_system}}));
      }

      std::optional<std::string> location;
      std::string lname = location_name(v, fp);
      if (!lname.empty()) {
        Properties lp;
        set(lp, "name", lname);
        if (fp.geometry) {
          auto wkt = geo::to_wkt(*fp.geometry);
          set(lp, "wkt", wkt);
          set(lp, "geometry_hash", hashing::sha256_hex(wkt).substr(0, 16));
        }
        set(lp, "scope", std::string(geo::to_string(fp.scope)));
        set(lp, "countries", std::vector<std::string>(fp.countries.begin(), fp.countries.end()));
        set(lp, "continents", std::vector<std::string>(fp.continents.begin(), fp.continents.end()));
        location = b.node("Location", std::move(lp));
        b.edge("hasLocation", ds, location);
      }

      for (const auto& s : v.stations) b.edge("hasStation", ds, b.node("Station", {{"name", s}}));

      std::vector<std::optional<std::string>> orgs;
      for (const auto& o : v.organizations) {
        Properties p;
        set(p, "name", o.name);
        set(p, "long_name", o.long_name);
        orgs.push_back(b.node("Organization", std::move(p)));
        b.edge("hasOrganization", ds, orgs.back());
      }
      for (const auto& p : v.platforms) {
        Properties pp;
        set(pp, "name", p.name);
        set(pp, "long_name", p.long_name);
        set(pp, "type", p.type);
        set(pp, "instruments", p.instruments);
        auto pid = b.node("Platform", std::move(pp));
        b.edge("hasPlatform", ds, pid);
        if (location) b.edge("operatesAtLocation", pid, location);
      }
      for (const auto& c : v.consortiums) {
        auto cid = b.node("Consortium", {{"name", c}});
        b.edge("hasConsortium", ds, cid);
        for (const auto& o : orgs) b.edge("belongsToConsortium", o, cid);
      }
      for (const auto& t : v.temporal) {
        Properties tp;
        set(tp, "start", t.start);
        set(tp, "end", t.end);
        tp["ongoing"] = t.ongoing;
        b.edge("hasTemporalExtent", ds, b.node("TemporalExtent", std::move(tp)));
      }
      for (const auto& var : v.variables) {
        Properties p;
        set(p, "dataset", rec.concept_id);
        set(p, "name", var.name);
        set(p, "long_name", var.long_name);
        set(p, "units", var.units);
        b.edge("hasVariable", ds, b.node("Variable", std::move(p)));
      }
      for (const auto& link : er.cesm_links) {
        if (link.confidence < options.confidence_threshold) continue;
        auto target = cesm_id(link.name);
        if (!target) {
          b.dangling("hasCESMVariable: " + rec.concept_id + " -> unknown variable " + link.name + " dropped");
          continue;
        }
        b.edge("hasCESMVariable", ds, target, confidence(link.confidence));
      }
      for (const auto& s : er.resolution.spatial.sentences) {
        Properties p;
        set(p, "text", s);
        set(p, "source", std::string(enrich::to_string(er.resolution.spatial.match_kind)));
        b.edge("hasSpatialResolution", ds, b.node("SpatialResolution", std::move(p)));
      }
      for (const auto& s : er.resolution.temporal.sentences) {
        Properties p;
        set(p, "text", s);
        set(p, "source", std::string(enrich::to_string(er.resolution.temporal.match_kind)));
        b.edge("hasTemporalResolution", ds, b.node("TemporalResolution", std::move(p)));
      }
      if (!v.processing_level.empty()) {
        Properties p;
        set(p, "name", v.processing_level);
        set(p, "description", v.processing_level_description);
        b.edge("hasProcessingLevel", ds, b.node("ProcessingLevel", std::move(p)));
      }
      for (const auto& l : v.links) {
        Properties p;
        set(p, "url", l.url);
        set(p, "kind", l.kind);
        set(p, "title", l.title);
        b.edge("hasLink", ds, b.node("Link", std::move(p)));
      }
      for (const auto& pr : v.projects) {
        Properties p;
        set(p, "name", pr.name);
        set(p, "long_name", pr.long_name);
        b.edge("hasProject", ds, b.node("Project", std::move(p)));
      }
      for (const auto& k : v.keywords) {
        Properties p;
        set(p, "name", k.name);
        set(p, "path", k.path);
        auto kid = b.node("ScienceKeyword", std::move(p));
        b.edge("hasScienceKeyword", ds, kid);
        if (!kid || !in.keyword_classifier) continue;
        auto [it, fresh] = keyword_cache.try_emplace(*kid);
        if (fresh) it->second = in.keyword_classifier->classify(k.name);
        const auto& pred = it->second;
        if (pred && pred->confidence >= options.confidence_threshold) {
          auto target = cesm_id(pred->name);
          if (target) b.edge("describesVariable", kid, target, confidence(pred->confidence));
        }
      }
      for (const auto& c : v.contacts) {
        Properties p;
        set(p, "name", c.name);
        set(p, "roles", c.roles);
        set(p, "email", c.email);
        auto cid = b.node("Contact", std::move(p));
        b.edge("hasContact", ds, cid);
        if (c.organization) {
          b.edge("worksForOrganization", cid, b.find("Organization", {{"name", *c.organization}}));
        } else if (orgs.size() == 1) {
          b.edge("worksForOrganization", cid, orgs.front());
        }
      }
    }
  }
  return b.finish(embedder);
}

std::vector<std::string> validate_graph(const Graph& g, const GraphSchema& schema) {
  std::vector<std::string> problems;
  for (const auto& [id, n] : g.nodes) {
    const LabelSpec* spec = schema.label(n.label);
    if (!spec) {
      problems.push_back("node " + id + " has unknown label " + n.label);
      continue;
    }
    if (n.id != id) problems.push_back("node " + id + " stored under a different id");
    if (spec->embedding != n.embedding.has_value()) {
      problems.push_back("node " + id + " (" + n.label + ") embedding presence does not match its label");
    }
    for (const auto& [k, _] : n.properties) {
      bool declared = std::any_of(spec->properties.begin(), spec->properties.end(),
                                  [&](const PropertySpec& p) { return p.name == k; });
      if (!declared) problems.push_back("node " + id + " has undeclared property " + k);
    }
  }
  for (const auto& e : g.edges) {
    const EdgeSpec* spec = schema.edge(e.type);
    auto s = g.nodes.find(e.start), t = g.nodes.find(e.end);
    if (!spec) {
      problems.push_back("edge of unknown type " + e.type);
    } else if (s == g.nodes.end() || t == g.nodes.end()) {
      problems.push_back(e.type + " edge references a missing node: " + e.start + " -> " + e.end);
    } else if (s->second.label != spec->from || t->second.label != spec->to) {
      problems.push_back(e.type + " edge joins " + s->second.label + " -> " + t->second.label);
    }
  }
  return problems;
}

}  // namespace climkg::graph
