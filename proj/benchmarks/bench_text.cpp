#include <benchmark/benchmark.h>

#include <random>

#include "climkg/embedding.hpp"
#include "climkg/enrich.hpp"

using namespace climkg;

namespace {

const std::vector<enrich::CesmVariable>& catalog() {
  static const auto c = enrich::load_cesm_catalog(std::string(CLIMKG_FIXTURES_DIR) + "/cesm_vars.csv");
  return c;
}

void BM_SimilarityRatio(benchmark::State& state) {
  const auto& vars = catalog();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = vars[i % vars.size()];
    const auto& b = vars[(i * 7 + 3) % vars.size()];
    benchmark::DoNotOptimize(enrich::similarity_ratio(a.description, b.description));
    ++i;
  }
}
BENCHMARK(BM_SimilarityRatio);

void BM_ClusterCatalog(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enrich::cluster_variables(catalog()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(catalog().size()));
}
BENCHMARK(BM_ClusterCatalog)->Unit(benchmark::kMillisecond);

void BM_HashEmbed(benchmark::State& state) {
  embed::HashEmbedder e;
  const auto& vars = catalog();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(e.embed(vars[i++ % vars.size()].description));
}
BENCHMARK(BM_HashEmbed);

void BM_Ngrams(benchmark::State& state) {
  const std::string text =
      "Monthly mean sea surface temperature and reference height air temperature over the North Atlantic basin";
  for (auto _ : state) benchmark::DoNotOptimize(enrich::generate_ngrams(text));
}
BENCHMARK(BM_Ngrams);

}  // namespace
