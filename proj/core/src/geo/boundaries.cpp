#include <fstream>
#include <iterator>

#include "climkg/error.hpp"
#include "climkg/geo.hpp"

namespace climkg::geo {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

BoundarySet BoundarySet::build(std::vector<BoundaryEntry> entries) {
  BoundarySet set;
  std::vector<Value> values;
  values.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.name.empty()) throw ValidationError("boundary entry " + std::to_string(i) + " has no name");
    if (e.geometry.is_none()) throw ValidationError("boundary " + e.name + " has no geometry");
    if (!set.continent_map_.emplace(e.name, e.continent).second) {
      throw ValidationError("duplicate boundary name " + e.name);
    }
    set.boxes_.push_back(e.geometry.bbox());
    values.emplace_back(set.boxes_.back(), i);
  }
  set.entries_ = std::move(entries);
  set.tree_ = Tree(values.begin(), values.end());  // packed bulk load
  return set;
}

BoundarySet BoundarySet::from_geojson(const nlohmann::json& collection) {
  if (collection.value("type", std::string()) != "FeatureCollection") {
    throw ValidationError("boundary file is not a GeoJSON FeatureCollection");
  }
  std::vector<BoundaryEntry> entries;
  for (const auto& f : collection.at("features")) {
    const auto& props = f.at("properties");
    BoundaryEntry e;
    e.name = props.at("name").get<std::string>();
    e.continent = props.at("continent").get<std::string>();
    e.geometry = geometry_from_geojson(f.at("geometry"));
    entries.push_back(std::move(e));
  }
  return build(std::move(entries));
}

BoundarySet BoundarySet::load_geojson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read boundary file " + path.string());
  try {
    return from_geojson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("boundary file " + path.string() + ": " + e.what());
  }
}

std::vector<std::size_t> BoundarySet::query(const Box& probe) const {
  std::vector<Value> hits;
  tree_.query(bgi::intersects(probe), std::back_inserter(hits));
  std::vector<std::size_t> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(h.second);
  std::sort(out.begin(), out.end());
  return out;
}

const std::string& BoundarySet::continent_of(const std::string& name) const {
  auto it = continent_map_.find(name);
  if (it == continent_map_.end()) throw ValidationError("unknown boundary " + name);
  return it->second;
}

std::vector<std::size_t> candidate_boundaries(const Geometry& g, const BoundarySet& boundaries) {
  if (g.is_none()) return {};
  return boundaries.query(g.bbox());
}

}  // namespace climkg::geo
