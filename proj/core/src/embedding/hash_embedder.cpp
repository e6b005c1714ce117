#include <algorithm>
#include <cmath>

#include "climkg/embedding.hpp"
#include "climkg/error.hpp"
#include "climkg/hashing.hpp"
#include "climkg/text.hpp"

namespace climkg::embed {

Embedding::Embedding(std::vector<float> values) : values_(std::move(values)) {
  if (values_.size() != kDimension) {
    throw ValidationError("embedding has dimension " + std::to_string(values_.size()) + ", expected " +
                          std::to_string(kDimension));
  }
  for (float v : values_) {
    if (!std::isfinite(v)) throw ValidationError("embedding contains a non-finite value");
  }
}

double Embedding::norm() const noexcept {
  double s = 0.0;
  for (float v : values_) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

bool Embedding::is_zero() const noexcept {
  for (float v : values_) {
    if (v != 0.0f) return false;
  }
  return true;
}

double cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw ValidationError("cosine: dimension mismatch");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

std::vector<Embedding> Embedder::embed_batch(std::span<const std::string> texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed(t));
  return out;
}

std::vector<std::string> HashEmbedder::features(std::string_view text) {
  std::vector<std::string> out;
  auto words = text::word_tokens(text);
  for (const auto& w : words) out.push_back("w:" + w);
  for (std::size_t i = 0; i + 1 < words.size(); ++i) out.push_back("b:" + words[i] + " " + words[i + 1]);
  auto normalized = text::to_lower(text::collapse_whitespace(text));
  for (std::size_t i = 0; i + 3 <= normalized.size(); ++i) out.push_back("c:" + normalized.substr(i, 3));
  return out;
}

Embedding HashEmbedder::embed(std::string_view text) {
  std::vector<double> acc(kDimension, 0.0);
  for (const auto& f : features(text)) {
    std::uint64_t h = hashing::fnv1a64(f);
    acc[h % kDimension] += (h >> 63) ? -1.0 : 1.0;
  }
  double norm = 0.0;
  for (double v : acc) norm += v * v;
  norm = std::sqrt(norm);
  std::vector<float> values(kDimension, 0.0f);
  if (norm > 0.0) {
    for (std::size_t i = 0; i < kDimension; ++i) values[i] = static_cast<float>(acc[i] / norm);
  }
  return Embedding(std::move(values));
}

std::unique_ptr<Embedder> make_embedder(std::string_view spec) {
  if (spec == "hash" || spec.empty()) return std::make_unique<HashEmbedder>();
  constexpr std::string_view kSub = "subprocess:";
  if (spec.substr(0, kSub.size()) == kSub && spec.size() > kSub.size()) {
    return std::make_unique<SubprocessEmbedder>(std::string(spec.substr(kSub.size())));
  }
  throw ValidationError("unknown embedding provider '" + std::string(spec) + "' (expected hash or subprocess:<cmd>)");
}

}  // namespace climkg::embed
