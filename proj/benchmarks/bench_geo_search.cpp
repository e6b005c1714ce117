#include <benchmark/benchmark.h>

#include <random>

#include "climkg/discovery.hpp"
#include "climkg/geo.hpp"

using namespace climkg;

namespace {

const geo::BoundarySet& world() {
  static const auto bs = geo::BoundarySet::load_geojson(std::string(CLIMKG_FIXTURES_DIR) + "/world.geojson");
  return bs;
}

std::vector<geo::Geometry> probes(std::size_t n) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> lat(-80, 70), lon(-180, 160), size(0.1, 20);
  std::vector<geo::Geometry> out;
  for (std::size_t i = 0; i < n; ++i) {
    double s = lat(rng), w = lon(rng), d = size(rng);
    out.push_back(geo::bbox_to_polygon(s, w, std::min(90.0, s + d), std::min(180.0, w + d)));
  }
  return out;
}

void BM_ClassifyFootprint(benchmark::State& state) {
  auto ps = probes(256);
  world();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(geo::classify_footprint(ps[i++ % ps.size()], &world()));
}
BENCHMARK(BM_ClassifyFootprint);

void BM_TopkExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(5);
  std::normal_distribution<float> g;
  auto vec = [&] {
    std::vector<float> v(embed::kDimension);
    for (auto& x : v) x = g(rng);
    return v;
  };
  std::vector<graph::Node> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back(graph::Node{std::to_string(i), "Location", {}, embed::Embedding(vec())});
  }
  std::vector<const graph::Node*> cands;
  for (const auto& node : nodes) cands.push_back(&node);
  auto q = vec();
  for (auto _ : state) benchmark::DoNotOptimize(discovery::topk_exact(cands, q, 10));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_TopkExact)->Arg(1000)->Arg(10000);

}  // namespace
