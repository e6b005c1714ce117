#include <nlohmann/json.hpp>

#include <cmath>

#include "climkg/embedding.hpp"
#include "climkg/error.hpp"
#include "climkg/subprocess.hpp"

namespace climkg::embed {

struct SubprocessEmbedder::Impl {
  explicit Impl(const std::string& command) : process(command) {}
  LineProcess process;
};

SubprocessEmbedder::SubprocessEmbedder(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout), impl_(std::make_unique<Impl>(command_)) {}

SubprocessEmbedder::~SubprocessEmbedder() = default;

Embedding SubprocessEmbedder::embed(std::string_view text) {
  nlohmann::json request{{"text", text}};
  auto reply = impl_->process.request(request.dump(), timeout_);
  if (!reply) throw RuntimeFailure("embedding provider '" + command_ + "' did not answer");
  std::vector<float> values;
  try {
    auto j = nlohmann::json::parse(*reply);
    values = j.at("embedding").get<std::vector<float>>();
  } catch (const nlohmann::json::exception& e) {
    throw RuntimeFailure("embedding provider '" + command_ + "' protocol violation: " + e.what());
  }
  if (values.size() != kDimension) {
    throw RuntimeFailure("embedding provider returned dimension " + std::to_string(values.size()));
  }
  double norm = 0.0;
  for (float v : values) norm += static_cast<double>(v) * v;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (float& v : values) v = static_cast<float>(v / norm);
  }
  return Embedding(std::move(values));
}

}  // namespace climkg::embed
