#include "climkg/error.hpp"
#include "climkg/graph.hpp"
#include "climkg/hashing.hpp"
#include "climkg/text.hpp"

namespace climkg::graph {

std::string node_id(std::string_view schema_version, std::string_view label,
                    const std::map<std::string, std::string>& key_fields) {
  constexpr char kUnit = '\x1f';
  std::string canonical(schema_version);
  canonical += kUnit;
  canonical += label;
  bool any = false;
  // std::map iterates keys in sorted order.
  for (const auto& [k, v] : key_fields) {
    std::string value = text::to_lower(text::trim(v));
    if (!value.empty()) any = true;
    canonical += kUnit;
    canonical += k;
    canonical += '=';
    canonical += value;
  }
  if (!any) throw ValidationError("empty natural key for " + std::string(label));
  return hashing::sha256_hex(canonical).substr(0, 16);
}

std::size_t Graph::count(std::string_view label) const {
  std::size_t n = 0;
  for (const auto& [_, node] : nodes) n += node.label == label;
  return n;
}

}  // namespace climkg::graph
