#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "climkg/enrich.hpp"
#include "climkg/error.hpp"
#include "climkg/subprocess.hpp"

namespace climkg::enrich {

NearestNeighborClassifier::NearestNeighborClassifier(const std::vector<CesmVariable>& catalog,
                                                     embed::Embedder& embedder)
    : embedder_(embedder) {
  if (catalog.empty()) throw ValidationError("classifier needs a non-empty variable catalog");
  std::vector<std::size_t> order(catalog.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return catalog[a].name < catalog[b].name; });
  std::vector<std::string> descriptions;
  for (auto i : order) {
    names_.push_back(catalog[i].name);
    descriptions.push_back(catalog[i].description);
  }
  vectors_ = embedder_.embed_batch(descriptions);
}

std::vector<Prediction> NearestNeighborClassifier::score_all(std::string_view t) {
  auto q = embedder_.embed(t);
  std::vector<Prediction> out;
  out.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) out.push_back({names_[i], embed::cosine(q, vectors_[i])});
  return out;
}

Prediction NearestNeighborClassifier::classify(std::string_view t) {
  auto scores = score_all(t);
  // Names are sorted, so keeping the first maximum picks the smallest name.
  const Prediction* best = &scores.front();
  for (const auto& p : scores) {
    if (p.confidence > best->confidence) best = &p;
  }
  return *best;
}

struct SubprocessClassifier::Impl {
  explicit Impl(const std::string& command) : process(command) {}
  LineProcess process;
};

SubprocessClassifier::SubprocessClassifier(std::string command, std::set<std::string> known_names,
                                           VariableClassifier& fallback, std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>(command)), known_(std::move(known_names)), fallback_(fallback), timeout_(timeout) {}

SubprocessClassifier::~SubprocessClassifier() = default;

Prediction SubprocessClassifier::classify(std::string_view t) {
  if (degraded_) return fallback_.classify(t);
  std::string problem;
  Prediction p;
  auto reply = impl_->process.request(nlohmann::json{{"text", t}}.dump(), timeout_);
  if (!reply) {
    problem = "no reply within timeout";
  } else {
    try {
      auto j = nlohmann::json::parse(*reply);
      p.name = j.at("name").get<std::string>();
      p.confidence = j.at("confidence").get<double>();
      if (!std::isfinite(p.confidence) || p.confidence < 0.0 || p.confidence > 1.0) {
        problem = "confidence outside [0,1]";
      } else if (!known_.empty() && !known_.count(p.name)) {
        problem = "unknown variable '" + p.name + "'";
      }
    } catch (const nlohmann::json::exception& e) {
      problem = std::string("malformed reply: ") + e.what();
    }
  }
  if (problem.empty()) return p;
  spdlog::warn("classifier '{}': {}; using the built-in baseline from now on", impl_->process.command(), problem);
  degraded_ = true;
  return fallback_.classify(t);
}

}  // namespace climkg::enrich
