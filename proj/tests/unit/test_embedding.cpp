#include <doctest.h>

#include <cstring>
#include <random>

#include "climkg/embedding.hpp"
#include "climkg/error.hpp"
#include "climkg/hashing.hpp"
#include "support.hpp"

using namespace climkg;

namespace {

std::string random_text(std::mt19937& rng) {
  static const char* words[] = {"sea", "ice", "surface", "temperature", "ocean", "Salinity", "wind", "speed",
                                "aerosol", "optical", "depth", "precip", "x", "42", "-", "é"};
  std::uniform_int_distribution<int> n(0, 12), w(0, 15);
  std::string s;
  for (int i = n(rng); i > 0; --i) {
    if (!s.empty()) s += ' ';
    s += words[w(rng)];
  }
  return s;
}

}  // namespace

TEST_SUITE("embedding") {
  TEST_CASE("empty text is the zero sentinel") {
    embed::HashEmbedder e;
    auto v = e.embed("");
    CHECK(v.is_zero());
    CHECK(v.values().size() == embed::kDimension);
    CHECK(embed::cosine(v, e.embed("ocean")) == 0.0);
  }

  TEST_CASE("non-empty text is unit norm") {
    embed::HashEmbedder e;
    std::mt19937 rng(4);
    for (int i = 0; i < 500; ++i) {
      auto t = random_text(rng);
      auto v = e.embed(t);
      if (embed::HashEmbedder::features(t).empty()) {
        CHECK(v.is_zero());
      } else {
        CHECK(std::abs(v.norm() - 1.0) <= 1e-6);
      }
    }
  }

  TEST_CASE("features follow the documented recipe") {
    auto f = embed::HashEmbedder::features("Sea ice");
    std::set<std::string> got(f.begin(), f.end());
    for (const char* want : {"w:sea", "w:ice", "b:sea ice", "c:sea", "c:ice", "c:a i"}) CHECK(got.count(want) == 1);
  }

  TEST_CASE("bucket and sign come from 64-bit FNV-1a") {
    // Reference computation straight from the feature list.
    embed::HashEmbedder e;
    auto feats = embed::HashEmbedder::features("q");
    std::vector<double> want(embed::kDimension, 0.0);
    for (const auto& f : feats) {
      auto h = hashing::fnv1a64(f);
      want[h % embed::kDimension] += (h >> 63) ? -1.0 : 1.0;
    }
    double n = 0;
    for (double x : want) n += x * x;
    auto v = e.embed("q");
    for (std::size_t i = 0; i < embed::kDimension; ++i) CHECK(v.values()[i] == doctest::Approx(want[i] / std::sqrt(n)));
  }

  TEST_CASE("frozen ordering of related and unrelated phrases") {
    embed::HashEmbedder e;
    auto a = e.embed("sea surface temperature");
    double related = embed::cosine(a, e.embed("sea surface temperature anomaly"));
    double unrelated = embed::cosine(a, e.embed("aerosol optical depth"));
    CHECK(related > unrelated);
    CHECK(related > 0.8);
  }

  TEST_CASE("batch equals single calls bit for bit") {
    embed::HashEmbedder e;
    CHECK(e.embed_batch({}).empty());
    std::mt19937 rng(10);
    std::vector<std::string> texts;
    for (int i = 0; i < 10000; ++i) texts.push_back(random_text(rng));
    auto batch = e.embed_batch(texts);
    REQUIRE(batch.size() == texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
      auto single = e.embed(texts[i]);
      REQUIRE(std::memcmp(single.values().data(), batch[i].values().data(), sizeof(float) * embed::kDimension) == 0);
    }
  }

  TEST_CASE("embedding construction validates the vector") {
    CHECK_THROWS_AS(embed::Embedding(std::vector<float>(10, 1.0f)), ValidationError);
    std::vector<float> nan(embed::kDimension, 0.0f);
    nan[3] = std::nanf("");
    CHECK_THROWS_AS(embed::Embedding{nan}, ValidationError);
  }

  TEST_CASE("provider selection") {
    CHECK(embed::make_embedder("hash")->provider() == "hash");
    CHECK_THROWS_AS(embed::make_embedder("word2vec"), ValidationError);
    auto sub = embed::make_embedder("subprocess:sh " + (support::data_dir() / "embedder_axis.sh").string());
    CHECK(sub->provider().rfind("subprocess:", 0) == 0);
  }

  TEST_CASE("subprocess embedder re-normalizes and rejects bad replies") {
    embed::SubprocessEmbedder good("sh " + (support::data_dir() / "embedder_axis.sh").string());
    auto v = good.embed("anything");
    CHECK(v.values()[0] == doctest::Approx(1.0));
    CHECK(v.norm() == doctest::Approx(1.0));
    std::vector<std::string> two{"a", "b"};
    auto b = good.embed_batch(two);
    CHECK(b.size() == 2);

    embed::SubprocessEmbedder bad("sh " + (support::data_dir() / "embedder_short.sh").string());
    CHECK_THROWS_AS(bad.embed("x"), RuntimeFailure);
  }
}
