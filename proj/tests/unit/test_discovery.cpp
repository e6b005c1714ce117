#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "climkg/discovery.hpp"
#include "support.hpp"

using namespace climkg;
using nlohmann::json;
using namespace std::chrono;

namespace {

const store::PropertyGraph& fixture() {
  static const auto pg = store::PropertyGraph::load_csv(support::fixture_run_dir() / "graph");
  return pg;
}

std::string dataset_by_concept(const std::string& concept_id) {
  for (const auto& id : fixture().ids("Dataset")) {
    if (fixture().node(id)->properties.at("concept_id") == concept_id) return id;
  }
  return {};
}

dates::Day jan1(int y) { return sys_days{year{y} / January / 1}; }

std::vector<graph::Node> vector_nodes(const std::vector<std::vector<float>>& vs, float scale = 1.0f) {
  std::vector<graph::Node> out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::vector<float> v = vs[i];
    for (auto& x : v) x *= scale;
    char id[17];
    std::snprintf(id, sizeof id, "%016zx", i);
    out.push_back(graph::Node{id, "Location", {}, embed::Embedding(v)});
  }
  return out;
}

std::vector<std::string> ids_of(const std::vector<discovery::DiscoveryResult>& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs) out.push_back(r.dataset_id);
  return out;
}

discovery::SearchOptions fixed_clock() {
  discovery::SearchOptions o;
  o.clock = [] { return std::string("2000-01-01T00:00:00Z"); };
  return o;
}

}  // namespace

TEST_SUITE("discovery") {
  TEST_CASE("top-k equals a full scan and survives positive scaling") {
    auto vs = support::random_vectors(1000, 77);
    auto nodes = vector_nodes(vs);
    auto scaled = vector_nodes(vs, 3.5f);
    std::vector<const graph::Node*> c, cs;
    for (const auto& n : nodes) c.push_back(&n);
    for (const auto& n : scaled) cs.push_back(&n);
    auto q = support::random_vectors(5, 78);
    for (const auto& query : q) {
      for (std::size_t k : {1u, 10u, 100u}) {
        auto want = support::oracle::topk_scan(vs, query, k);
        auto got = discovery::topk_exact(c, query, k);
        auto got_scaled = discovery::topk_exact(cs, query, k);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < k; ++i) {
          CHECK(got[i].node == &nodes[want[i]]);
          CHECK(got_scaled[i].node->id == got[i].node->id);
        }
      }
    }
  }

  TEST_CASE("self query scores one; oversized k returns everything") {
    auto vs = support::random_vectors(20, 3);
    auto nodes = vector_nodes(vs);
    std::vector<const graph::Node*> c;
    for (const auto& n : nodes) c.push_back(&n);
    auto top = discovery::topk_exact(c, vs[7], 1);
    CHECK(top[0].node == &nodes[7]);
    CHECK(top[0].score == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(discovery::topk_exact(c, vs[0], 500).size() == 20);
  }

  TEST_CASE("routing is a pure function of the label") {
    auto schema = graph::GraphSchema::builtin();
    CHECK(discovery::route_search("ScienceKeyword", schema) == discovery::Plan::Vector);
    CHECK(discovery::route_search("Platform", schema) == discovery::Plan::Text);
    CHECK(discovery::route_search("CESMVariable", schema) == discovery::Plan::Text);
    CHECK(discovery::route_search("CESMVariable", graph::GraphSchema::builtin(true)) == discovery::Plan::Vector);
    std::set<std::string> vector_labels{"DataCategory", "Variable", "ScienceKeyword", "Location",
                                        "TemporalResolution", "SpatialResolution"};
    for (const auto& l : schema.labels()) {
      bool expect = vector_labels.count(l.name) || l.workflow;
      CHECK((discovery::route_search(l.name, schema) == discovery::Plan::Vector) == expect);
    }
    CHECK_THROWS_WITH_AS(discovery::route_search("Spaceship", schema), doctest::Contains("DataCategory"),
                         discovery::RoutingError);
  }

  TEST_CASE("top-k on a non-embedding label is a routing error") {
    std::vector<float> q(embed::kDimension, 0.1f);
    CHECK_THROWS_AS(discovery::topk_by_embedding(fixture(), q, "Platform", 3), discovery::RoutingError);
  }

  TEST_CASE("temporal examples") {
    discovery::Interval iv{jan1(2000), jan1(2010)};
    CHECK(discovery::temporal_overlap(iv, discovery::after(jan1(2005))));
    CHECK_FALSE(discovery::temporal_overlap(iv, discovery::before(jan1(1999))));
    CHECK(discovery::temporal_overlap({jan1(1950), std::nullopt}, discovery::after(jan1(2100))));
    CHECK_THROWS_AS(discovery::between(jan1(2001), jan1(2000)), ValidationError);
  }

  TEST_CASE("temporal overlap equals year-set intersection") {
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> yr(1980, 2030);
    for (int trial = 0; trial < 5000; ++trial) {
      int s = yr(rng), e = yr(rng);
      if (s > e) std::swap(s, e);
      bool open = rng() % 5 == 0;
      std::set<int> have;
      for (int y = s; y <= (open ? 2100 : e); ++y) have.insert(y);
      discovery::Interval iv{jan1(s), open ? std::nullopt : std::optional<dates::Day>(jan1(e))};
      int a = yr(rng), b = yr(rng);
      if (a > b) std::swap(a, b);
      auto meets = [&](int lo, int hi) {
        return std::any_of(have.begin(), have.end(), [&](int y) { return y >= lo && y <= hi; });
      };
      CHECK(discovery::temporal_overlap(iv, discovery::after(jan1(a))) == meets(a, 9999));
      CHECK(discovery::temporal_overlap(iv, discovery::before(jan1(a))) == meets(0, a));
      CHECK(discovery::temporal_overlap(iv, discovery::between(jan1(a), jan1(b))) == meets(a, b));
    }
  }

  TEST_CASE("New York after 2000 is exactly the tide gauge") {
    embed::HashEmbedder emb;
    discovery::DiscoveryQuery q;
    q.spatial_text = "New York";
    q.temporal = discovery::after(jan1(2000));
    auto rs = discovery::multi_criteria_search(q, fixture(), graph::GraphSchema::builtin(), emb, fixed_clock());
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].dataset_id == dataset_by_concept("C1200000042-CLIMKG"));
    CHECK(rs[0].provenance["timestamp"] == "2000-01-01T00:00:00Z");
    q.temporal.reset();
    auto both = discovery::multi_criteria_search(q, fixture(), graph::GraphSchema::builtin(), emb);
    CHECK(both.size() == 2);
  }

  TEST_CASE("no constraints is plain top-k over categories projected to datasets") {
    embed::HashEmbedder emb;
    discovery::DiscoveryQuery q;
    q.text = "oceans sea surface height";
    q.k = 3;
    auto rs = discovery::multi_criteria_search(q, fixture(), graph::GraphSchema::builtin(), emb);

    auto qv = emb.embed(q.text);
    std::vector<std::pair<double, std::string>> scored;
    for (const auto* n : fixture().vectors("DataCategory")) scored.emplace_back(-embed::cosine(qv.values(), n->embedding->values()), n->id);
    std::sort(scored.begin(), scored.end());
    scored.resize(std::min<std::size_t>(3, scored.size()));
    std::map<std::string, double> want;
    for (const auto& [neg, cat] : scored) {
      for (const auto& e : fixture().graph().edges) {
        if (e.type == "hasDataCategory" && e.end == cat) {
          auto [it, fresh] = want.try_emplace(e.start, -neg);
          if (!fresh) it->second = std::max(it->second, -neg);
        }
      }
    }
    REQUIRE(rs.size() == want.size());
    for (const auto& r : rs) CHECK(r.score == want.at(r.dataset_id));
    for (std::size_t i = 1; i < rs.size(); ++i) {
      CHECK((rs[i - 1].score > rs[i].score || (rs[i - 1].score == rs[i].score && rs[i - 1].dataset_id < rs[i].dataset_id)));
    }
  }

  TEST_CASE("adding constraints never enlarges the result") {
    embed::HashEmbedder emb;
    auto schema = graph::GraphSchema::builtin();
    for (const std::string text : {"", "temperature", "ocean"}) {
      discovery::DiscoveryQuery q;
      q.text = text;
      q.k = 50;
      auto base = ids_of(discovery::multi_criteria_search(q, fixture(), schema, emb));
      std::set<std::string> b(base.begin(), base.end());
      for (int v = 0; v < 4; ++v) {
        auto narrowed = q;
        if (v == 0) narrowed.temporal = discovery::after(jan1(2000));
        if (v == 1) narrowed.temporal = discovery::between(jan1(1990), jan1(1995));
        if (v == 2) narrowed.organization = "NASA";
        if (v == 3) narrowed.spatial_text = "Pacific Ocean";
        auto rs = discovery::multi_criteria_search(narrowed, fixture(), schema, emb);
        for (const auto& r : rs) {
          CHECK(b.count(r.dataset_id) == 1);
          CHECK_FALSE(r.constraints.empty());
          if (narrowed.temporal) {
            auto bounds = discovery::dataset_bounds(fixture(), r.dataset_id);
            REQUIRE(bounds);
            CHECK(discovery::temporal_overlap(*bounds, *narrowed.temporal));
          }
        }
        if (narrowed.temporal) {
          auto twice = narrowed;
          twice.organization = "NASA";
          CHECK(discovery::multi_criteria_search(twice, fixture(), schema, emb).size() <= rs.size());
        }
      }
    }
  }

  TEST_CASE("query validation") {
    discovery::DiscoveryQuery q;
    q.k = 0;
    CHECK_THROWS_AS(q.validate(), ValidationError);
  }

  TEST_CASE("resolution of the reanalysis dataset yields TREFHT in ATM with its span") {
    auto id = dataset_by_concept("C1200000024-CLIMKG");
    REQUIRE_FALSE(id.empty());
    auto vars = discovery::resolve_cesm_variables(fixture(), id);
    auto it = std::find_if(vars.begin(), vars.end(), [](auto& v) { return v.name == "TREFHT"; });
    REQUIRE(it != vars.end());
    CHECK(it->component == "ATM");
    REQUIRE(it->bounds);
    CHECK(dates::format_day(it->bounds->start) == "1993-01-01");
    CHECK(dates::format_day(*it->bounds->end) == "2020-12-31");
    std::set<std::string> cesm;
    for (const auto& vid : fixture().ids("CESMVariable")) cesm.insert(fixture().node(vid)->properties.at("name").get<std::string>());
    for (const auto& v : vars) CHECK(cesm.count(v.name) == 1);
  }

  TEST_CASE("dataset without CESM links resolves to nothing") {
    std::size_t empty = 0;
    for (const auto& id : fixture().ids("Dataset")) {
      if (fixture().edges(id, "hasCESMVariable", store::Direction::Out).empty()) {
        CHECK(discovery::resolve_cesm_variables(fixture(), id).empty());
        ++empty;
      }
    }
    CHECK(empty > 0);
    CHECK_THROWS_AS(discovery::resolve_cesm_variables(fixture(), "0000000000000000"), ValidationError);
  }

  TEST_CASE("cache round trip, dedupe and newest first") {
    support::TempDir d;
    discovery::DiscoveryResult a{"aaaa", "A", 0.5, {"temporal:after 2000-01-01"}, json{{"q", 1}}};
    discovery::DiscoveryResult b{"bbbb", "B", 0.4, {}, json::object()};
    {
      discovery::ResultCache c(d / "cache.db");
      c.persist("q1", {a, b});
      c.persist("q1", {a});
      CHECK(c.recall("unknown").empty());
    }
    discovery::ResultCache again(d / "cache.db");
    auto got = again.recall("q1");
    REQUIRE(got.size() == 2);
    std::set<std::string> ids{got[0].dataset_id, got[1].dataset_id};
    CHECK(ids == std::set<std::string>{"aaaa", "bbbb"});
    for (const auto& r : got) {
      if (r.dataset_id == "aaaa") {
        CHECK(r.constraints == a.constraints);
        CHECK(r.score == a.score);
        CHECK(r.provenance["cached"] == true);
        CHECK(r.provenance["query"]["text"] == "q1");
      }
    }
    discovery::DiscoveryResult c2{"cccc", "C", 0.1, {}, json::object()};
    again.persist("q1", {c2});
    CHECK(again.recall("q1").front().dataset_id == "cccc");
  }

  TEST_CASE("corrupt cache is moved aside and rebuilt") {
    support::TempDir d;
    support::write_file(d / "cache.db", "this is not a database, just some bytes that go on for a while............");
    discovery::ResultCache c(d / "cache.db");
    REQUIRE(c.backup());
    CHECK(std::filesystem::exists(*c.backup()));
    CHECK(c.recall("x").empty());
    c.persist("x", {discovery::DiscoveryResult{"id", "t", 1.0, {}, json::object()}});
    CHECK(c.recall("x").size() == 1);
  }

  TEST_CASE("two processes share results through the cache file") {
    support::TempDir d;
    auto graph = (support::fixture_run_dir() / "graph").string();
    auto cache = (d / "cache.db").string();
    std::string base = "'" + support::cli_path().string() + "' search --graph '" + graph + "' --cache '" + cache +
                       "' --place 'New York' --after 2000";
    std::string first, second;
    REQUIRE(support::run_command(base + " 2>/dev/null", &first) == 0);
    REQUIRE(support::run_command(base + " --recall 2>/dev/null", &second) == 0);
    auto id_lines = [](const std::string& s) {
      std::vector<std::string> ids;
      std::istringstream in(s);
      std::string line;
      while (std::getline(in, line)) ids.push_back(json::parse(line).at("dataset_id"));
      return ids;
    };
    CHECK_FALSE(id_lines(first).empty());
    CHECK(id_lines(first) == id_lines(second));
  }
}
