#include <fstream>

#include "climkg/error.hpp"
#include "climkg/ingest.hpp"
#include "climkg/resources.hpp"

namespace climkg::ingest {

Schema Schema::from_json(const nlohmann::json& j) {
  Schema s;
  if (!j.is_object() || !j.contains("schema_version") || !j.contains("attributes")) {
    throw ValidationError("schema: expected object with schema_version and attributes");
  }
  s.version = j.at("schema_version").get<std::string>();
  for (const auto& a : j.at("attributes")) {
    Attribute attr;
    attr.name = a.at("name").get<std::string>();
    attr.umm_key = a.value("umm", std::string());
    attr.json_key = a.value("json", std::string());
    if (attr.name.empty()) throw ValidationError("schema: attribute with empty name");
    if (attr.umm_key.empty() && attr.json_key.empty()) {
      throw ValidationError("schema: attribute " + attr.name + " maps to neither format");
    }
    for (const auto& existing : s.attributes) {
      if (existing.name == attr.name) throw ValidationError("schema: duplicate attribute " + attr.name);
    }
    s.attributes.push_back(std::move(attr));
  }
  return s;
}

Schema Schema::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read schema " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("schema " + path.string() + ": " + e.what());
  }
}

Schema Schema::builtin() { return from_json(nlohmann::json::parse(resources::get("schema.json"))); }

}  // namespace climkg::ingest
