#include <doctest.h>

#include <algorithm>
#include <random>

#include "climkg/error.hpp"
#include "climkg/hashing.hpp"
#include "climkg/store.hpp"
#include "climkg/text.hpp"
#include "support.hpp"

using namespace climkg;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fixture_graph_dir() { return support::fixture_run_dir() / "graph"; }

void copy_graph(const fs::path& to) {
  fs::create_directories(to);
  for (const auto& e : fs::directory_iterator(fixture_graph_dir())) fs::copy_file(e.path(), to / e.path().filename());
}

// Random Dataset/Platform graph with hasPlatform edges.
graph::Graph random_graph(std::size_t datasets, std::size_t platforms, std::size_t edges, std::uint32_t seed) {
  std::mt19937 rng(seed);
  graph::Graph g;
  std::vector<std::string> ds, pf;
  for (std::size_t i = 0; i < datasets; ++i) {
    auto id = graph::node_id("1.0", "Dataset", {{"concept_id", "D" + std::to_string(i)}});
    g.nodes[id] = graph::Node{id, "Dataset", {{"concept_id", "D" + std::to_string(i)}}, std::nullopt};
    ds.push_back(id);
  }
  for (std::size_t i = 0; i < platforms; ++i) {
    auto id = graph::node_id("1.0", "Platform", {{"name", "P" + std::to_string(i)}});
    g.nodes[id] = graph::Node{id, "Platform", {{"name", "P" + std::to_string(i)}}, std::nullopt};
    pf.push_back(id);
  }
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::uniform_int_distribution<std::size_t> pd(0, ds.size() - 1), pp(0, pf.size() - 1);
  while (seen.size() < edges) {
    seen.insert({"hasPlatform", ds[pd(rng)], pf[pp(rng)]});
  }
  for (const auto& [t, s, e] : seen) g.edges.push_back(graph::Edge{s, e, t, {}});
  return g;
}

std::vector<std::string> oracle_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double oracle_jaccard(std::vector<std::string> a, std::vector<std::string> b) {
  std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& x : sa) inter += sb.count(x);
  return static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size() - inter);
}

}  // namespace

TEST_SUITE("store") {
  TEST_CASE("fixture load: counts equal the manifest, no diagnostics") {
    store::LoadReport report;
    auto pg = store::PropertyGraph::load_csv(fixture_graph_dir(), &report);
    CHECK(report.diagnostics.empty());
    auto manifest = graph::Manifest::from_json(json::parse(support::read_file(fixture_graph_dir() / "manifest.json")));
    std::size_t nodes = 0, edges = 0;
    for (const auto& f : manifest.files) {
      if (f.kind == "nodes") {
        nodes += f.rows;
        CHECK(pg.ids(f.name).size() == f.rows);
      } else {
        edges += f.rows;
      }
    }
    CHECK(report.nodes == nodes);
    CHECK(report.edges == edges);
    CHECK(pg.graph().nodes.size() == nodes);
    CHECK(pg.graph().edges.size() == edges);
  }

  TEST_CASE("load then emit is byte identical") {
    auto pg = store::PropertyGraph::load_csv(fixture_graph_dir());
    support::TempDir out;
    pg.emit_csv(out.path());
    for (const auto& e : fs::directory_iterator(fixture_graph_dir())) {
      CHECK(support::read_file(e.path()) == support::read_file(out / e.path().filename().string()));
    }
  }

  TEST_CASE("truncated file is refused") {
    support::TempDir d;
    copy_graph(d.path());
    auto body = support::read_file(d / "nodes_Dataset.csv");
    support::write_file(d / "nodes_Dataset.csv", body.substr(0, body.size() / 2));
    CHECK_THROWS_WITH_AS(store::PropertyGraph::load_csv(d.path()), doctest::Contains("nodes_Dataset.csv"),
                         ValidationError);
  }

  TEST_CASE("malformed rows become file:line diagnostics") {
    support::TempDir d;
    copy_graph(d.path());
    auto body = support::read_file(d / "nodes_Platform.csv") + "deadbeefdeadbeef,Platform,too,few\n";
    support::write_file(d / "nodes_Platform.csv", body);
    auto m = json::parse(support::read_file(d / "manifest.json"));
    std::size_t rows = 0;
    for (auto& f : m["files"]) {
      if (f["file"] == "nodes_Platform.csv") {
        f["rows"] = f["rows"].get<std::size_t>() + 1;
        f["sha256"] = hashing::sha256_hex(body);
        rows = f["rows"];
      }
    }
    support::write_file(d / "manifest.json", m.dump(2));
    store::LoadReport report;
    auto pg = store::PropertyGraph::load_csv(d.path(), &report);
    REQUIRE(report.diagnostics.size() == 1);
    CHECK(report.diagnostics[0].rfind("nodes_Platform.csv:" + std::to_string(rows + 1) + ":", 0) == 0);
    CHECK(pg.ids("Platform").size() == rows - 1);
  }

  TEST_CASE("typed traversal both ways") {
    auto pg = store::PropertyGraph::load_csv(fixture_graph_dir());
    const auto& datasets = pg.ids("Dataset");
    REQUIRE_FALSE(datasets.empty());
    std::size_t checked = 0;
    for (const auto& d : datasets) {
      for (const auto* p : pg.neighbors(d, "hasPlatform", store::Direction::Out)) {
        CHECK(p->label == "Platform");
        auto back = pg.neighbors(p->id, "hasPlatform", store::Direction::In);
        CHECK(std::any_of(back.begin(), back.end(), [&](const graph::Node* n) { return n->id == d; }));
        ++checked;
      }
    }
    CHECK(checked > 0);
    CHECK(pg.neighbors(datasets[0], "noSuchType", store::Direction::Out).empty());
    CHECK_THROWS_AS(pg.neighbors("0000000000000000", "hasPlatform", store::Direction::Out), ValidationError);
  }

  TEST_CASE("neighbors equal an edge-list scan on a random graph of 10^4 edges") {
    auto g = random_graph(400, 300, 10000, 5);
    auto pg = store::PropertyGraph::from_graph(g, graph::layout_from_schema(graph::GraphSchema::builtin()), "1.0");
    std::mt19937 rng(6);
    std::vector<std::string> ids;
    for (const auto& [id, n] : g.nodes) ids.push_back(id);
    for (int i = 0; i < 400; ++i) {
      const auto& id = ids[rng() % ids.size()];
      for (auto dir : {store::Direction::Out, store::Direction::In}) {
        std::vector<std::string> want;
        for (const auto& e : g.edges) {
          if (dir == store::Direction::Out && e.start == id) want.push_back(e.end);
          if (dir == store::Direction::In && e.end == id) want.push_back(e.start);
        }
        std::sort(want.begin(), want.end());
        std::vector<std::string> got;
        for (const auto* n : pg.neighbors(id, "hasPlatform", dir)) got.push_back(n->id);
        CHECK(got == want);
      }
    }
  }

  TEST_CASE("text search equals a brute-force Jaccard scorer") {
    auto pg = store::PropertyGraph::load_csv(fixture_graph_dir());
    std::vector<std::pair<std::string, std::string>> queries{
        {"Dataset", "sea surface temperature"}, {"Dataset", "tide gauge"}, {"Platform", "terra"},
        {"", "ocean"}, {"Dataset", "zzzz qqqq"}, {"CESMVariable", "TREFHT"}};
    for (const auto& [label, q] : queries) {
      std::vector<std::pair<double, std::string>> scan;
      auto qt = oracle_tokens(q);
      for (const auto& [id, n] : pg.graph().nodes) {
        if (!label.empty() && n.label != label) continue;
        std::string text;
        for (const char* k : {"name", "title"}) {
          auto it = n.properties.find(k);
          if (it != n.properties.end() && it->second.is_string()) text += " " + it->second.get<std::string>();
        }
        double s = oracle_jaccard(qt, oracle_tokens(text));
        if (s > 0) scan.emplace_back(-s, id);
      }
      std::sort(scan.begin(), scan.end());
      if (scan.size() > 10) scan.resize(10);
      auto hits = pg.text_search(label, q, 10);
      REQUIRE(hits.size() == scan.size());
      for (std::size_t i = 0; i < hits.size(); ++i) {
        CHECK(hits[i].node->id == scan[i].second);
        CHECK(hits[i].score == doctest::Approx(-scan[i].first));
      }
    }
  }

  TEST_CASE("exact name ranks first; no overlap is empty") {
    auto pg = store::PropertyGraph::load_csv(fixture_graph_dir());
    const auto& pid = pg.ids("Platform").front();
    auto name = pg.node(pid)->properties.at("name").get<std::string>();
    auto hits = pg.text_search("Platform", name, 5);
    REQUIRE_FALSE(hits.empty());
    CHECK(hits[0].node->id == pid);
    CHECK(pg.text_search("Platform", "xylophone", 5).empty());
  }

  TEST_CASE("vector index holds exactly the embedded nodes") {
    auto pg = store::PropertyGraph::load_csv(fixture_graph_dir());
    std::size_t embedded = 0;
    for (const auto& [id, n] : pg.graph().nodes) embedded += n.embedding.has_value();
    CHECK(pg.vector_count() == embedded);
    for (const auto& l : pg.labels()) {
      for (const auto* n : pg.vectors(l)) CHECK(n->embedding.has_value());
    }
    CHECK(pg.vectors("Dataset").empty());
  }

  TEST_CASE("jaccard helper") {
    CHECK(store::jaccard({}, {}) == 0.0);
    CHECK(store::jaccard({"a", "b"}, {"b", "c"}) == doctest::Approx(1.0 / 3.0));
    CHECK(store::jaccard({"a", "a"}, {"a"}) == 1.0);
  }
}
