#include "cli.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "climkg/acquisition.hpp"
#include "climkg/config.hpp"
#include "climkg/dates.hpp"
#include "climkg/discovery.hpp"
#include "climkg/embedding.hpp"
#include "climkg/enrich.hpp"
#include "climkg/error.hpp"
#include "climkg/geo.hpp"
#include "climkg/graph.hpp"
#include "climkg/http_client.hpp"
#include "climkg/ingest.hpp"
#include "climkg/store.hpp"

namespace climkg::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Context {
  std::ostream& out;
  std::ostream& err;
  RunConfig cfg;
  bool json_output = false;
};

// Human mode prints one `key: value` line per top-level member.
void emit(Context& ctx, const json& j) {
  if (ctx.json_output || !j.is_object()) {
    ctx.out << j.dump() << '\n';
    return;
  }
  for (const auto& [k, v] : j.items()) {
    ctx.out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw RuntimeFailure("cannot read " + p.string());
  return in;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write " + p.string());
  return out;
}

template <typename T>
T require_path(const std::optional<T>& flag, const std::optional<T>& configured, const char* what) {
  if (flag) return *flag;
  if (configured) return *configured;
  throw ValidationError(std::string("missing ") + what + " (flag or config paths)");
}

std::unique_ptr<http::Client> make_client(const Context& ctx) {
  return ctx.cfg.offline ? http::make_offline_client() : http::make_curl_client();
}

// ---------------------------------------------------------------------------
// Stage helpers shared by the single-stage commands and `run`.

struct Models {
  std::unique_ptr<embed::Embedder> embedder;
  std::vector<enrich::CesmVariable> catalog;
  std::unique_ptr<enrich::NearestNeighborClassifier> baseline;
  std::unique_ptr<enrich::SubprocessClassifier> external;

  enrich::VariableClassifier& classifier() {
    if (external) return *external;
    return *baseline;
  }
};

Models make_models(const RunConfig& cfg, const fs::path& cesm) {
  Models m;
  m.embedder = embed::make_embedder(cfg.embedding_provider);
  m.catalog = enrich::load_cesm_catalog(cesm);
  m.baseline = std::make_unique<enrich::NearestNeighborClassifier>(m.catalog, *m.embedder);
  const std::string prefix = "subprocess:";
  if (cfg.classifier_provider.rfind(prefix, 0) == 0) {
    std::set<std::string> names;
    for (const auto& v : m.catalog) names.insert(v.name);
    m.external = std::make_unique<enrich::SubprocessClassifier>(cfg.classifier_provider.substr(prefix.size()),
                                                                std::move(names), *m.baseline);
  } else if (cfg.classifier_provider != "baseline") {
    throw ValidationError("classifier.provider must be baseline or subprocess:<command>");
  }
  return m;
}

struct IngestOutcome {
  ingest::HarmonizeResult harmonized;
  ingest::FetchReport report;
};

IngestOutcome do_ingest(Context& ctx, const std::string& source, std::size_t page_size,
                        const std::optional<fs::path>& record_dir, std::size_t max_pages) {
  ingest::FetchOptions fo;
  fo.source = source;
  fo.page_size = page_size;
  fo.auth_token = http::token_from_environment();
  fo.offline = ctx.cfg.offline;
  fo.timeout = ctx.cfg.ingest_timeout;
  fo.retries = ctx.cfg.ingest_retries;
  fo.record_dir = record_dir;
  fo.max_pages = max_pages;
  auto client = make_client(ctx);
  std::vector<ingest::RawRecordPair> pairs;
  IngestOutcome o;
  o.report = ingest::fetch_dual_format(fo, *client, [&](ingest::RawRecordPair&& p) { pairs.push_back(std::move(p)); });
  o.harmonized = ingest::harmonize_corpus(pairs, ctx.cfg.schema());
  return o;
}

std::vector<ingest::HarmonizedRecord> read_records(const fs::path& p) {
  auto in = open_in(p);
  return ingest::read_jsonl(in);
}

std::map<std::string, geo::GeoFootprint> compute_footprints(const Context& ctx,
                                                            const std::vector<ingest::HarmonizedRecord>& records,
                                                            const geo::BoundarySet* boundaries) {
  std::map<std::string, geo::GeoFootprint> out;
  for (const auto& r : records) {
    std::vector<std::string> diags;
    auto g = geo::standardize_record_geometry(r, ctx.cfg.geometry, &diags);
    out[r.concept_id] = geo::classify_footprint(g, boundaries, ctx.cfg.scope);
  }
  return out;
}

std::vector<enrich::EnrichedRecord> do_enrich(const Context& ctx, const std::vector<ingest::HarmonizedRecord>& records,
                                              const std::map<std::string, geo::GeoFootprint>& footprints,
                                              Models& models) {
  enrich::ResolutionExtractor resolution(ctx.cfg.resolution());
  auto vocabulary = ctx.cfg.vocabulary();
  auto inference = ctx.cfg.inference();
  inference.confidence_threshold = ctx.cfg.confidence_threshold;
  std::vector<enrich::EnrichedRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    geo::GeoFootprint fp;
    if (auto it = footprints.find(r.concept_id); it != footprints.end()) fp = it->second;
    out.push_back(enrich::enrich_record(r, fp, resolution, vocabulary, models.classifier(), inference));
  }
  return out;
}

graph::BuildResult do_build(const Context& ctx, const std::vector<enrich::EnrichedRecord>& records, Models& models,
                            const std::vector<graph::WorkflowSeed>& workflows) {
  const auto schema = ctx.cfg.graph_schema();
  const auto clusters = enrich::cluster_variables(models.catalog, ctx.cfg.similarity);
  graph::BuildInputs in;
  in.records = &records;
  in.catalog = &models.catalog;
  in.clusters = &clusters;
  in.workflows = &workflows;
  in.keyword_classifier = &models.classifier();
  graph::BuildOptions opt;
  opt.schema_version = ctx.cfg.schema().version;
  opt.similar_edges = ctx.cfg.similar_edges;
  opt.confidence_threshold = ctx.cfg.confidence_threshold;
  auto result = graph::build_graph(in, schema, opt, *models.embedder);
  for (const auto& d : result.diagnostics) spdlog::warn("build: {}", d);
  auto problems = graph::validate_graph(result.graph, schema);
  if (!problems.empty()) throw ValidationError("graph failed validation: " + problems.front());
  return result;
}

graph::Manifest write_graph(const Context& ctx, const graph::Graph& g, const fs::path& dir) {
  return graph::emit_csv(g, graph::layout_from_schema(ctx.cfg.graph_schema()), dir, ctx.cfg.schema().version);
}

std::vector<graph::WorkflowSeed> workflows_or_empty(const std::optional<fs::path>& p) {
  if (!p) return {};
  return graph::load_workflows(*p);
}

json scope_counts(const std::map<std::string, geo::GeoFootprint>& fps) {
  std::map<std::string, int> counts;
  for (const auto& [id, fp] : fps) counts[std::string(geo::to_string(fp.scope))]++;
  return counts;
}

std::optional<dates::Day> parse_day_flag(const std::optional<std::string>& s, const char* flag) {
  if (!s) return std::nullopt;
  auto d = dates::parse_iso_day(*s);
  if (!d) throw ValidationError(std::string(flag) + ": cannot parse date '" + *s + "'");
  return d;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  // The sink refers to `err`; put the caller's logger back before `err` can go away.
  struct RestoreLogger {
    std::shared_ptr<spdlog::logger> previous = spdlog::default_logger();
    ~RestoreLogger() { spdlog::set_default_logger(previous); }
  } restore;
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("climkg", sink);
  logger->set_pattern("climkg: %l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);

  CLI::App app{"Climate metadata knowledge graph: harvest, enrich, build, search, acquire"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  bool json_output = false, offline = false, verbose = false, quiet = false, version = false;
  std::optional<std::string> config_path;
  app.add_flag("--json", json_output, "Machine-readable output");
  app.add_flag("--offline", offline, "Forbid all network access");
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_flag("-v,--verbose", verbose, "Log progress");
  app.add_flag("-q,--quiet", quiet, "Log errors only");
  app.add_flag("--version", version, "Print the schema version used for node ids");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Harvest dual-format catalog pages into harmonized JSON lines");
  std::string in_source;
  std::optional<std::size_t> in_page_size;
  std::optional<std::string> in_record_dir;
  std::size_t in_max_pages = 0;
  std::string in_out;
  ingest_cmd->add_option("--source", in_source, "Collections URL or fixture directory")->required();
  ingest_cmd->add_option("--out", in_out, "harmonized.jsonl")->required();
  ingest_cmd->add_option("--page-size", in_page_size)->check(CLI::PositiveNumber);
  ingest_cmd->add_option("--record-dir", in_record_dir, "Save raw page bodies here");
  ingest_cmd->add_option("--max-pages", in_max_pages, "Stop after N pages (0 = all)");

  // geo
  auto* geo_cmd = app.add_subcommand("geo", "Standardize footprints and classify spatial scope");
  std::string geo_in, geo_out;
  std::optional<std::string> geo_boundaries;
  geo_cmd->add_option("--in", geo_in)->required()->check(CLI::ExistingFile);
  geo_cmd->add_option("--out", geo_out)->required();
  geo_cmd->add_option("--boundaries", geo_boundaries, "GeoJSON boundary collection");

  // enrich
  auto* enrich_cmd = app.add_subcommand("enrich", "Footprints, resolution evidence and model-variable links");
  std::string en_in, en_out;
  std::optional<std::string> en_cesm, en_boundaries, en_footprints;
  enrich_cmd->add_option("--in", en_in)->required()->check(CLI::ExistingFile);
  enrich_cmd->add_option("--out", en_out)->required();
  enrich_cmd->add_option("--cesm", en_cesm, "CESM variable catalog CSV");
  enrich_cmd->add_option("--boundaries", en_boundaries, "Classify footprints inline");
  enrich_cmd->add_option("--footprints", en_footprints, "Output of `geo`")->check(CLI::ExistingFile);

  // build
  auto* build_cmd = app.add_subcommand("build", "Synthesize the property graph and emit bulk-load CSV");
  std::string b_in, b_out;
  std::optional<std::string> b_cesm, b_workflows;
  build_cmd->add_option("--in", b_in, "enriched.jsonl")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--out", b_out, "Graph directory")->required();
  build_cmd->add_option("--cesm", b_cesm);
  build_cmd->add_option("--workflows", b_workflows);

  // load
  auto* load_cmd = app.add_subcommand("load", "Load a graph directory and report its contents");
  std::string l_graph;
  bool l_check = false;
  load_cmd->add_option("--graph", l_graph)->required()->check(CLI::ExistingDirectory);
  load_cmd->add_flag("--check", l_check, "Fail on rejected rows or schema violations");

  // search
  auto* search_cmd = app.add_subcommand("search", "Multi-criteria dataset discovery (JSON lines)");
  std::string s_graph, s_query, s_label = "DataCategory";
  std::size_t s_k = 10;
  std::optional<std::string> s_after, s_before, s_place, s_org, s_cache;
  std::vector<std::string> s_between;
  bool s_recall = false;
  search_cmd->add_option("--graph", s_graph)->required()->check(CLI::ExistingDirectory);
  search_cmd->add_option("--query", s_query, "Semantic query text");
  search_cmd->add_option("--label", s_label, "Node label searched first");
  search_cmd->add_option("-k", s_k, "Nodes kept by the primary search")->check(CLI::PositiveNumber);
  auto* o_after = search_cmd->add_option("--after", s_after, "YYYY or YYYY-MM-DD");
  auto* o_before = search_cmd->add_option("--before", s_before, "YYYY or YYYY-MM-DD");
  search_cmd->add_option("--between", s_between, "Two dates")->expected(2)->excludes(o_after)->excludes(o_before);
  o_after->excludes(o_before);
  search_cmd->add_option("--place", s_place, "Place name matched against Location nodes");
  search_cmd->add_option("--org", s_org, "Organization name filter");
  search_cmd->add_option("--cache", s_cache, "SQLite result cache");
  search_cmd->add_flag("--recall", s_recall, "Print cached results for the query instead of searching");

  // resolve
  auto* resolve_cmd = app.add_subcommand("resolve", "Model variables linked to a dataset, with temporal bounds");
  std::string r_graph, r_dataset;
  resolve_cmd->add_option("--graph", r_graph)->required()->check(CLI::ExistingDirectory);
  resolve_cmd->add_option("--dataset", r_dataset)->required();

  // acquire
  auto* acquire_cmd = app.add_subcommand("acquire", "Retrieve, normalize, validate and analyze a dataset");
  std::string a_graph, a_dataset, a_out;
  std::optional<std::string> a_link_root;
  bool a_check_only = false;
  acquire_cmd->add_option("--graph", a_graph)->required()->check(CLI::ExistingDirectory);
  acquire_cmd->add_option("--dataset", a_dataset)->required();
  acquire_cmd->add_option("--out", a_out)->required();
  acquire_cmd->add_option("--link-root", a_link_root, "Base directory of relative file: links");
  acquire_cmd->add_flag("--check-only", a_check_only, "Validate links without downloading");

  // eval-cluster
  auto* eval_cmd = app.add_subcommand("eval-cluster", "Exact and group accuracy of variable predictions");
  std::string e_pred, e_truth;
  std::optional<std::string> e_cesm;
  eval_cmd->add_option("--pred", e_pred, "id,name CSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--truth", e_truth, "id,name CSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--cesm", e_cesm, "Catalog whose clusters define the groups");

  // cluster
  auto* cluster_cmd = app.add_subcommand("cluster", "Similarity clusters of the CESM catalog (JSON lines)");
  std::optional<std::string> c_cesm;
  cluster_cmd->add_option("--cesm", c_cesm);

  // run
  auto* run_cmd = app.add_subcommand("run", "ingest, enrich and build in one pass");
  std::string p_source, p_out;
  std::optional<std::string> p_cesm, p_boundaries, p_workflows;
  run_cmd->add_option("--source", p_source)->required();
  run_cmd->add_option("--out", p_out, "Work directory")->required();
  run_cmd->add_option("--cesm", p_cesm);
  run_cmd->add_option("--boundaries", p_boundaries);
  run_cmd->add_option("--workflows", p_workflows);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (verbose) spdlog::set_level(spdlog::level::info);
  if (quiet) spdlog::set_level(spdlog::level::err);

  auto opt_path = [](const std::optional<std::string>& s) -> std::optional<fs::path> {
    if (!s) return std::nullopt;
    return fs::path(*s);
  };

  try {
    Context ctx{out, err, config_path ? RunConfig::load(*config_path) : RunConfig{}, json_output};
    if (offline) ctx.cfg.offline = true;
    if (version) {
      out << ctx.cfg.schema().version << '\n';
      return kOk;
    }
    if (app.get_subcommands().empty()) {
      err << app.help();
      return kUsage;
    }
    ctx.cfg.validate();

    if (ingest_cmd->parsed()) {
      auto o = do_ingest(ctx, in_source, in_page_size.value_or(ctx.cfg.page_size), opt_path(in_record_dir),
                         in_max_pages);
      auto f = open_out(in_out);
      ingest::write_jsonl(f, o.harmonized.records);
      emit(ctx, {{"records", o.harmonized.records.size()},
                 {"pairs", o.report.pairs},
                 {"pages", o.report.pages},
                 {"skipped", o.report.skipped},
                 {"warnings", o.harmonized.warnings},
                 {"out", in_out}});
    } else if (geo_cmd->parsed()) {
      auto records = read_records(geo_in);
      auto bpath = opt_path(geo_boundaries);
      if (!bpath) bpath = ctx.cfg.paths.boundaries;
      std::optional<geo::BoundarySet> boundaries;
      if (bpath) boundaries = geo::BoundarySet::load_geojson(*bpath);
      auto fps = compute_footprints(ctx, records, boundaries ? &*boundaries : nullptr);
      auto f = open_out(geo_out);
      for (const auto& [id, fp] : fps) f << json{{"concept_id", id}, {"footprint", geo::to_json(fp)}}.dump() << '\n';
      emit(ctx, {{"records", fps.size()}, {"scopes", scope_counts(fps)}, {"out", geo_out}});
    } else if (enrich_cmd->parsed()) {
      auto records = read_records(en_in);
      std::map<std::string, geo::GeoFootprint> fps;
      if (en_footprints) {
        auto in = open_in(*en_footprints);
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          auto j = json::parse(line);
          fps[j.at("concept_id").get<std::string>()] = geo::footprint_from_json(j.at("footprint"));
        }
      } else {
        auto bpath = opt_path(en_boundaries);
        if (!bpath) bpath = ctx.cfg.paths.boundaries;
        std::optional<geo::BoundarySet> boundaries;
        if (bpath) boundaries = geo::BoundarySet::load_geojson(*bpath);
        fps = compute_footprints(ctx, records, boundaries ? &*boundaries : nullptr);
      }
      auto models = make_models(ctx.cfg, require_path(opt_path(en_cesm), ctx.cfg.paths.cesm, "--cesm"));
      auto enriched = do_enrich(ctx, records, fps, models);
      std::size_t links = 0;
      for (const auto& e : enriched) links += e.cesm_links.size();
      auto f = open_out(en_out);
      enrich::write_jsonl(f, enriched);
      emit(ctx, {{"records", enriched.size()}, {"cesm_links", links}, {"out", en_out}});
    } else if (build_cmd->parsed()) {
      std::vector<enrich::EnrichedRecord> records;
      {
        auto in = open_in(b_in);
        records = enrich::read_enriched_jsonl(in);
      }
      auto models = make_models(ctx.cfg, require_path(opt_path(b_cesm), ctx.cfg.paths.cesm, "--cesm"));
      auto wf_path = opt_path(b_workflows);
      if (!wf_path) wf_path = ctx.cfg.paths.workflows;
      auto result = do_build(ctx, records, models, workflows_or_empty(wf_path));
      auto manifest = write_graph(ctx, result.graph, b_out);
      out << manifest.to_json().dump(ctx.json_output ? -1 : 2) << '\n';
    } else if (load_cmd->parsed()) {
      store::LoadReport report;
      auto g = store::PropertyGraph::load_csv(l_graph, &report);
      json labels = json::object();
      for (const auto& l : g.labels()) labels[l] = g.ids(l).size();
      std::vector<std::string> problems = report.diagnostics;
      if (l_check) {
        auto v = graph::validate_graph(g.graph(), ctx.cfg.graph_schema());
        problems.insert(problems.end(), v.begin(), v.end());
      }
      emit(ctx, {{"schema_version", g.schema_version()},
                 {"nodes", report.nodes},
                 {"edges", report.edges},
                 {"vectors", g.vector_count()},
                 {"labels", labels},
                 {"problems", problems}});
      if (l_check && !problems.empty()) {
        for (const auto& p : problems) err << p << '\n';
        return kValidation;
      }
    } else if (search_cmd->parsed()) {
      discovery::DiscoveryQuery q;
      q.text = s_query;
      q.node_label = s_label;
      q.k = s_k;
      if (auto d = parse_day_flag(s_after, "--after")) q.temporal = discovery::after(*d);
      if (auto d = parse_day_flag(s_before, "--before")) q.temporal = discovery::before(*d);
      if (!s_between.empty()) {
        q.temporal = discovery::between(*parse_day_flag(s_between[0], "--between"),
                                        *parse_day_flag(s_between[1], "--between"));
      }
      q.spatial_text = s_place;
      q.organization = s_org;
      q.validate();
      const std::string key = q.to_json().dump();
      std::optional<discovery::ResultCache> cache;
      if (s_cache) cache.emplace(*s_cache);
      std::vector<discovery::DiscoveryResult> results;
      if (s_recall) {
        if (!cache) throw ValidationError("--recall needs --cache");
        results = cache->recall(key);
      } else {
        auto g = store::PropertyGraph::load_csv(s_graph);
        auto embedder = embed::make_embedder(ctx.cfg.embedding_provider);
        discovery::SearchOptions so;
        so.spatial_min_score = ctx.cfg.spatial_min_score;
        results = discovery::multi_criteria_search(q, g, ctx.cfg.graph_schema(), *embedder, so);
        if (cache) cache->persist(key, results);
      }
      for (const auto& r : results) out << r.to_json().dump() << '\n';
    } else if (resolve_cmd->parsed()) {
      auto g = store::PropertyGraph::load_csv(r_graph);
      if (!g.node(r_dataset)) throw ValidationError("unknown dataset id " + r_dataset);
      for (const auto& v : discovery::resolve_cesm_variables(g, r_dataset)) {
        json j{{"name", v.name}, {"component", v.component}, {"confidence", v.confidence}};
        if (v.bounds) {
          j["start"] = dates::format_day(v.bounds->start);
          j["end"] = v.bounds->end ? json(dates::format_day(*v.bounds->end)) : json(nullptr);
        }
        out << j.dump() << '\n';
      }
    } else if (acquire_cmd->parsed()) {
      auto g = store::PropertyGraph::load_csv(a_graph);
      if (!g.node(a_dataset)) throw ValidationError("unknown dataset id " + a_dataset);
      acquisition::AcquisitionOptions ao;
      ao.out_dir = a_out;
      ao.link_root = a_link_root ? fs::path(*a_link_root) : ctx.cfg.paths.link_root.value_or(fs::current_path());
      ao.timeout = ctx.cfg.acquisition_timeout;
      ao.max_bytes = ctx.cfg.acquisition_max_bytes;
      ao.bearer_token = http::token_from_environment();
      ao.offline = ctx.cfg.offline;
      auto client = make_client(ctx);
      if (a_check_only) {
        acquisition::AcquisitionState st;
        st.dataset_id = a_dataset;
        st.links = acquisition::extract_links(g, a_dataset);
        auto v = acquisition::validate(st, client.get(), true, ao);
        emit(ctx, {{"dataset_id", a_dataset}, {"validation", v.to_json()}});
        return v.link_valid && v.accessible ? kOk : kRuntime;
      }
      auto st = acquisition::run_pipeline(g, a_dataset, *client, ao);
      ctx.out << st.to_json().dump(ctx.json_output ? -1 : 2) << '\n';
      if (st.status == acquisition::Status::Failed) {
        for (const auto& d : st.diagnostics) err << d << '\n';
        return kRuntime;
      }
    } else if (eval_cmd->parsed()) {
      auto catalog = enrich::load_cesm_catalog(require_path(opt_path(e_cesm), ctx.cfg.paths.cesm, "--cesm"));
      auto clusters = enrich::cluster_variables(catalog, ctx.cfg.similarity);
      auto r = enrich::evaluate_predictions(enrich::load_prediction_csv(e_pred), enrich::load_prediction_csv(e_truth),
                                            clusters);
      emit(ctx, {{"total", r.total},
                 {"exact_accuracy", r.exact_accuracy},
                 {"group_accuracy", r.group_accuracy},
                 {"error_reduction", r.error_reduction},
                 {"unmatched", r.unmatched}});
    } else if (cluster_cmd->parsed()) {
      auto catalog = enrich::load_cesm_catalog(require_path(opt_path(c_cesm), ctx.cfg.paths.cesm, "--cesm"));
      for (const auto& c : enrich::cluster_variables(catalog, ctx.cfg.similarity)) {
        out << json{{"cluster_id", c.cluster_id}, {"representative", c.representative}, {"members", c.members}}.dump()
            << '\n';
      }
    } else if (run_cmd->parsed()) {
      const fs::path work = p_out;
      auto o = do_ingest(ctx, p_source, ctx.cfg.page_size, std::nullopt, 0);
      {
        auto f = open_out(work / "harmonized.jsonl");
        ingest::write_jsonl(f, o.harmonized.records);
      }
      auto bpath = opt_path(p_boundaries);
      if (!bpath) bpath = ctx.cfg.paths.boundaries;
      std::optional<geo::BoundarySet> boundaries;
      if (bpath) boundaries = geo::BoundarySet::load_geojson(*bpath);
      auto fps = compute_footprints(ctx, o.harmonized.records, boundaries ? &*boundaries : nullptr);
      auto models = make_models(ctx.cfg, require_path(opt_path(p_cesm), ctx.cfg.paths.cesm, "--cesm"));
      auto enriched = do_enrich(ctx, o.harmonized.records, fps, models);
      {
        auto f = open_out(work / "enriched.jsonl");
        enrich::write_jsonl(f, enriched);
      }
      auto wf_path = opt_path(p_workflows);
      if (!wf_path) wf_path = ctx.cfg.paths.workflows;
      auto result = do_build(ctx, enriched, models, workflows_or_empty(wf_path));
      auto manifest = write_graph(ctx, result.graph, work / "graph");
      out << manifest.to_json().dump(ctx.json_output ? -1 : 2) << '\n';
    }
    return kOk;
  } catch (const RetryableFetchError& e) {
    err << "error: " << e.what() << " (resume cursor: " << e.cursor() << ")\n";
    return kRuntime;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const RuntimeFailure& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return kValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace climkg::cli
