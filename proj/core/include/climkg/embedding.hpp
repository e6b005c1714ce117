#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace climkg::embed {

inline constexpr std::size_t kDimension = 384;

/// A 384-dimensional text embedding. Unit-norm, except the all-zero vector
/// used for text that carries no features.
class Embedding {
 public:
  Embedding() : values_(kDimension, 0.0f) {}
  /// Throws ValidationError unless `values` has kDimension finite entries.
  explicit Embedding(std::vector<float> values);

  std::span<const float> values() const noexcept { return values_; }
  double norm() const noexcept;
  bool is_zero() const noexcept;

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  std::vector<float> values_;
};

/// Cosine similarity accumulated in double; 0 when either side is zero.
double cosine(std::span<const float> a, std::span<const float> b);
inline double cosine(const Embedding& a, const Embedding& b) { return cosine(a.values(), b.values()); }

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual Embedding embed(std::string_view text) = 0;
  virtual std::vector<Embedding> embed_batch(std::span<const std::string> texts);
  /// Provider spec this embedder was built from (`hash`, `subprocess:<cmd>`).
  virtual std::string provider() const = 0;
};

/// Signed feature hashing: lowercase word unigrams, word bigrams and
/// character trigrams, hashed with 64-bit FNV-1a into 384 buckets
/// (bucket = h mod 384, sign from bit 63), then L2-normalized.
class HashEmbedder final : public Embedder {
 public:
  Embedding embed(std::string_view text) override;
  std::string provider() const override { return "hash"; }

  /// The feature strings hashed for `text`, namespaced `w:`, `b:`, `c:`.
  static std::vector<std::string> features(std::string_view text);
};

/// Delegates to an external encoder speaking line-delimited JSON:
/// `{"text": "..."}` in, `{"embedding": [384 numbers]}` out.
/// Protocol failures throw RuntimeFailure; vectors are re-normalized.
class SubprocessEmbedder final : public Embedder {
 public:
  explicit SubprocessEmbedder(std::string command, std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~SubprocessEmbedder() override;
  Embedding embed(std::string_view text) override;
  std::string provider() const override { return "subprocess:" + command_; }

 private:
  struct Impl;
  std::string command_;
  std::chrono::milliseconds timeout_;
  std::unique_ptr<Impl> impl_;
};

/// `hash` or `subprocess:<command>`; anything else is a ValidationError.
std::unique_ptr<Embedder> make_embedder(std::string_view provider_spec);

}  // namespace climkg::embed
