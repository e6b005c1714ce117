// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "climkg/acquisition.hpp"
#include "climkg/discovery.hpp"
#include "climkg/enrich.hpp"
#include "climkg/geo.hpp"
#include "climkg/graph.hpp"
#include "climkg/hashing.hpp"
#include "climkg/ingest.hpp"
#include "climkg/store.hpp"
#include "support.hpp"

using namespace climkg;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::string cmd = quote(support::cli_path().string()) + " --config " + quote(support::config_path().string());
  for (const auto& a : args) cmd += " " + quote(a);
  return support::run_command(cmd + " 2>/dev/null", out);
}

std::vector<json> json_lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

std::string dataset_id(const std::string& concept_id) {
  return graph::node_id("1.0", "Dataset", {{"concept_id", concept_id}});
}

// 1 -------------------------------------------------------------------------

Outcome merge_law() {
  Outcome r;
  auto schema = ingest::Schema::from_json(
      json{{"schema_version", "a1"}, {"attributes", {{{"name", "Abstract"}, {"umm", "Abstract"}, {"json", "summary"}}}}});
  enum State { Absent, Empty, Value };
  const std::vector<json> empties{"", "   ", nullptr, json::array(), json::object()};
  for (int u = Absent; u <= Value; ++u) {
    for (int j = Absent; j <= Value; ++j) {
      for (const auto& empty : empties) {
        json umm = json::object(), js = json::object();
        if (u == Empty) umm["Abstract"] = empty;
        if (u == Value) umm["Abstract"] = "from umm";
        if (j == Empty) js["summary"] = empty;
        if (j == Value) js["summary"] = "from json";
        auto rec = ingest::merge_records({"C1", js, umm}, schema);
        auto it = rec.fields.find("Abstract");
        std::string tag = "umm=" + std::to_string(u) + " json=" + std::to_string(j) + " empty=" + empty.dump();
        if (u == Value) {
          r.require(it != rec.fields.end() && it->second.value == "from umm" &&
                        it->second.provenance == ingest::Provenance::Umm,
                    tag);
        } else if (j == Value) {
          r.require(it != rec.fields.end() && it->second.value == "from json" &&
                        it->second.provenance == ingest::Provenance::Json,
                    tag);
        } else {
          r.require(it == rec.fields.end(), tag);
        }
      }
    }
  }
  return r;
}

// 2 -------------------------------------------------------------------------

Outcome scope_table() {
  Outcome r;
  std::size_t cases = 0;
  for (bool multinational : {false, true}) {
    for (bool empty : {false, true}) {
      for (std::size_t c = 0; c <= 6; ++c) {
        for (std::size_t k = 0; k <= 3; ++k) {
          auto got = geo::to_string(geo::classify_scope(c, k, empty, {multinational}));
          auto want = support::oracle::scope_table(c, k, empty, multinational);
          r.require(got == want, "countries=" + std::to_string(c) + " continents=" + std::to_string(k) +
                                     " empty=" + std::to_string(empty) + ": " + std::string(got) + " vs " + want);
          ++cases;
        }
      }
    }
  }
  r.require(cases == 112, "tuple count");
  return r;
}

// 3 -------------------------------------------------------------------------

Outcome geo_oracle() {
  Outcome r;
  auto world = geo::BoundarySet::load_geojson(support::fixtures_dir() / "world.geojson");
  r.require(world.size() == 258, "boundary count " + std::to_string(world.size()));
  auto probes = support::random_probes(200, 2024);
  std::size_t mismatches = 0;
  std::set<std::string> scopes;
  for (bool multinational : {false, true}) {
    for (const auto& p : probes) {
      auto got = geo::classify_footprint(p, &world, {multinational});
      scopes.insert(std::string(geo::to_string(got.scope)));
      auto want = support::oracle::linear_scan_classify(&p, world.entries(), multinational);
      if (got.countries != want.countries || got.continents != want.continents ||
          std::string(geo::to_string(got.scope)) != want.scope) {
        ++mismatches;
      }
    }
  }
  r.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  r.require(scopes.size() >= 4, "probes reach only " + std::to_string(scopes.size()) + " scopes");
  return r;
}

// 4 -------------------------------------------------------------------------

Outcome clustering_oracle() {
  Outcome r;
  auto vars = support::synthetic_variables(100, 41);
  enrich::SimilarityThresholds t;
  t.description = 0.7;
  t.name = 0.8;
  std::set<std::set<std::string>> got;
  for (const auto& c : enrich::cluster_variables(vars, t)) got.insert(c.members);
  auto want = support::oracle::closure_partition(vars, 0.7, 0.8);
  r.require(got == want, "partition differs");
  std::size_t nontrivial = 0;
  for (const auto& s : want) nontrivial += s.size() > 1;
  r.require(nontrivial > 0, "no multi-member clusters to compare");
  return r;
}

// 5 -------------------------------------------------------------------------

Outcome metric_arithmetic() {
  Outcome r;
  auto clusters = enrich::clusters_from_edges({"A", "A2", "B"}, {{"A", "A2"}});
  std::map<std::string, std::string> truth, pred;
  for (int i = 0; i < 10000; ++i) {
    auto id = std::to_string(i);
    truth[id] = "A";
    pred[id] = i < 9345 ? "A" : (i < 9987 ? "A2" : "B");
  }
  auto e = enrich::evaluate_predictions(pred, truth, clusters);
  r.require(std::abs(e.exact_accuracy - 0.9345) < 1e-12, "exact " + std::to_string(e.exact_accuracy));
  r.require(std::abs(e.group_accuracy - 0.9987) < 1e-12, "group " + std::to_string(e.group_accuracy));
  r.require(std::abs(e.error_reduction - 0.980) <= 0.001, "reduction " + std::to_string(e.error_reduction));
  return r;
}

// 6 -------------------------------------------------------------------------

Outcome group_at_least_exact() {
  Outcome r;
  std::mt19937 rng(606);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t nv = 2 + rng() % 30;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < nv; ++i) names.push_back("V" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t e = rng() % (nv + 1); e > 0; --e) edges.emplace_back(names[rng() % nv], names[rng() % nv]);
    auto clusters = enrich::clusters_from_edges(names, edges);
    std::map<std::string, std::string> truth, pred;
    std::size_t n = 1 + rng() % 200;
    for (std::size_t i = 0; i < n; ++i) {
      auto id = "r" + std::to_string(i);
      truth[id] = names[rng() % nv];
      // Off-catalog predictions exercise the unmatched path.
      pred[id] = rng() % 10 == 0 ? "UNKNOWN" : names[rng() % nv];
    }
    auto ev = enrich::evaluate_predictions(pred, truth, clusters);
    r.require(ev.group_accuracy >= ev.exact_accuracy, "trial " + std::to_string(trial));
  }
  return r;
}

// 7 -------------------------------------------------------------------------

std::vector<graph::Node> as_nodes(const std::vector<std::vector<float>>& vs, const std::vector<float>& scale) {
  std::vector<graph::Node> out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    auto v = vs[i];
    for (auto& x : v) x *= scale[i];
    char id[17];
    std::snprintf(id, sizeof id, "%016zx", i);
    out.push_back(graph::Node{id, "Location", {}, embed::Embedding(v)});
  }
  return out;
}

Outcome topk_exactness() {
  Outcome r;
  auto vs = support::random_vectors(1000, 707);
  auto queries = support::random_vectors(10, 708);
  std::mt19937 rng(709);
  std::vector<float> one(vs.size(), 1.0f), uniform(vs.size(), 3.5f), varied;
  for (std::size_t i = 0; i < vs.size(); ++i) varied.push_back(std::ldexp(1.0f, static_cast<int>(rng() % 9) - 4));
  auto nodes = as_nodes(vs, one);
  std::vector<const graph::Node*> base;
  for (const auto& n : nodes) base.push_back(&n);
  for (const auto* scale : {&uniform, &varied}) {
    auto scaled = as_nodes(vs, *scale);
    std::vector<const graph::Node*> cs;
    for (const auto& n : scaled) cs.push_back(&n);
    for (const auto& q : queries) {
      for (std::size_t k : {1u, 10u, 100u}) {
        auto want = support::oracle::topk_scan(vs, q, k);
        auto got = discovery::topk_exact(base, q, k);
        auto got_scaled = discovery::topk_exact(cs, q, k);
        r.require(got.size() == k && got_scaled.size() == k, "result size for k=" + std::to_string(k));
        if (!r.ok) return r;
        for (std::size_t i = 0; i < k; ++i) {
          r.require(got[i].node == &nodes[want[i]], "k=" + std::to_string(k) + " rank " + std::to_string(i));
          r.require(got_scaled[i].node->id == got[i].node->id, "scaled k=" + std::to_string(k));
        }
      }
    }
  }
  return r;
}

// 8 -------------------------------------------------------------------------

Outcome graph_round_trip(const fs::path& work) {
  Outcome r;
  auto run = work / "rt";
  if (cli({"run", "--source", (support::fixtures_dir() / "catalog").string(), "--out", run.string()}) != 0) {
    r.require(false, "pipeline run failed");
    return r;
  }
  const auto g1 = run / "graph";
  store::LoadReport report;
  auto pg = store::PropertyGraph::load_csv(g1, &report);
  r.require(report.diagnostics.empty(), "load diagnostics");
  r.require(pg.ids("Dataset").size() == 50, "dataset count " + std::to_string(pg.ids("Dataset").size()));
  auto g2 = work / "rt-reemit";
  pg.emit_csv(g2);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(g1)) {
    ++files;
    r.require(fs::exists(g2 / e.path().filename()) &&
                  support::read_file(e.path()) == support::read_file(g2 / e.path().filename()),
              "re-emitted " + e.path().filename().string() + " differs");
  }
  std::size_t files2 = std::distance(fs::directory_iterator(g2), fs::directory_iterator{});
  r.require(files == files2, "file count");

  auto schema = graph::GraphSchema::builtin();
  auto problems = graph::validate_graph(pg.graph(), schema);
  r.require(problems.empty(), problems.empty() ? "" : problems.front());
  // Independent closure check: every label declared, every edge typed and endpoint-correct.
  for (const auto& [id, n] : pg.graph().nodes) r.require(schema.label(n.label) != nullptr, "label " + n.label);
  for (const auto& e : pg.graph().edges) {
    const auto* spec = schema.edge(e.type);
    r.require(spec != nullptr, "edge type " + e.type);
    if (!spec) continue;
    const auto* s = pg.node(e.start);
    const auto* t = pg.node(e.end);
    r.require(s && t, "dangling " + e.type);
    if (s && t) r.require(s->label == spec->from && t->label == spec->to, "endpoint labels of " + e.type);
  }
  return r;
}

// 9 -------------------------------------------------------------------------

Outcome end_to_end(const fs::path& work) {
  Outcome r;
  auto run = work / "e2e";
  if (cli({"run", "--source", (support::fixtures_dir() / "catalog").string(), "--out", run.string()}) != 0) {
    r.require(false, "pipeline run failed");
    return r;
  }
  std::string out;
  r.require(cli({"search", "--graph", (run / "graph").string(), "--place", "New York", "--after", "2000"}, &out) == 0,
            "search exit code");
  auto hits = json_lines(out);
  const auto battery = dataset_id("C1200000042-CLIMKG");
  r.require(hits.size() == 1, std::to_string(hits.size()) + " hits");
  if (!r.ok) return r;
  r.require(hits[0].at("dataset_id") == battery, "rank 1 is " + hits[0].at("dataset_id").dump());

  auto pg = store::PropertyGraph::load_csv(run / "graph");
  auto links = acquisition::extract_links(pg, battery);
  r.require(!links.empty() && links.front().url.rfind("file:", 0) == 0, "no local-file link");
  acquisition::AcquisitionOptions o;
  o.out_dir = work / "e2e-data";
  o.link_root = support::fixtures_dir();
  auto offline = http::make_offline_client();
  auto s = acquisition::run_pipeline(pg, battery, *offline, o);
  r.require(s.validation && s.validation->passed(), "V = 0");
  r.require(s.status == acquisition::Status::Analyzed, "status " + std::string(acquisition::to_string(s.status)));
  if (!r.ok) return r;
  auto summary = json::parse(support::read_file(*s.summary_path));
  const auto& slope = summary.at("columns").at(0).at("slope_per_year");
  r.require(slope.is_number() && std::abs(slope.get<double>() - 3.2) <= 0.2, "slope " + slope.dump());
  return r;
}

// 10 ------------------------------------------------------------------------

struct RunArtifacts {
  std::set<std::string> node_ids;
  std::map<std::string, std::string> checksums;
  std::vector<std::vector<std::string>> rankings;
};

RunArtifacts full_run(const fs::path& dir, const std::vector<std::vector<std::string>>& searches) {
  RunArtifacts a;
  if (cli({"run", "--source", (support::fixtures_dir() / "catalog").string(), "--out", dir.string()}) != 0) {
    throw std::runtime_error("pipeline run failed in " + dir.string());
  }
  auto pg = store::PropertyGraph::load_csv(dir / "graph");
  for (const auto& [id, n] : pg.graph().nodes) a.node_ids.insert(id);
  for (const auto& e : fs::directory_iterator(dir / "graph")) {
    a.checksums[e.path().filename().string()] = hashing::sha256_hex(support::read_file(e.path()));
  }
  for (const auto& args : searches) {
    std::vector<std::string> full{"search", "--graph", (dir / "graph").string()};
    full.insert(full.end(), args.begin(), args.end());
    std::string out;
    if (cli(full, &out) != 0) throw std::runtime_error("search failed");
    std::vector<std::string> ranking;
    for (const auto& h : json_lines(out)) ranking.push_back(h.at("dataset_id").get<std::string>() + "@" + h.at("score").dump());
    a.rankings.push_back(ranking);
  }
  return a;
}

Outcome determinism(const fs::path& work) {
  Outcome r;
  std::vector<std::vector<std::string>> searches{{"--place", "New York", "--after", "2000"},
                                                 {"--query", "sea surface temperature"},
                                                 {"--query", "precipitation", "--label", "ScienceKeyword"},
                                                 {"--query", "ice", "--before", "2010"}};
  auto a = full_run(work / "det-a", searches);
  auto b = full_run(work / "det-b", searches);
  r.require(!a.node_ids.empty(), "empty graph");
  r.require(a.node_ids == b.node_ids, "node ids differ");
  r.require(a.checksums == b.checksums, "checksums differ");
  r.require(a.rankings == b.rankings, "rankings differ");
  std::size_t nonempty = 0;
  for (const auto& rk : a.rankings) nonempty += !rk.empty();
  r.require(nonempty >= 2, "searches returned nothing to compare");
  return r;
}

}  // namespace

int main() {
  support::TempDir work("climkg-acceptance");
  struct Criterion {
    int number;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "merge preference hierarchy", 1, merge_law},
      {2, "scope decision table", 1, scope_table},
      {3, "footprint classification equals linear scan", 30, geo_oracle},
      {4, "clustering equals transitive closure", 10, clustering_oracle},
      {5, "exact/group accuracy arithmetic", 1, metric_arithmetic},
      {6, "group accuracy never below exact", 10, group_at_least_exact},
      {7, "top-k equals full cosine scan", 10, topk_exactness},
      {8, "graph CSV round trip and schema closure", 30, [&] { return graph_round_trip(work.path()); }},
      {9, "planted tide gauge: search and acquisition", 60, [&] { return end_to_end(work.path()); }},
      {10, "determinism across full runs", 120, [&] { return determinism(work.path()); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && secs > c.budget_s) {
      o.ok = false;
      o.detail = "over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget";
    }
    char line[256];
    std::snprintf(line, sizeof line, "%s %2d %-46s %8.3f s", o.ok ? "PASS" : "FAIL", c.number, c.name.c_str(), secs);
    std::cout << line;
    if (!o.ok) std::cout << "  (" << o.detail << ")";
    std::cout << std::endl;
    failed += !o.ok;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
