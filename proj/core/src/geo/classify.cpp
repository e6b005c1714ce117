#include <spdlog/spdlog.h>

#include "climkg/error.hpp"
#include "climkg/geo.hpp"
#include "climkg/ingest.hpp"
#include "climkg/numeric_format.hpp"
#include "climkg/text.hpp"

namespace climkg::geo {

namespace bg = boost::geometry;
using nlohmann::json;

std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::Ocean: return "ocean";
    case Scope::Global: return "global";
    case Scope::Continental: return "continental";
    case Scope::Country: return "country";
    case Scope::Multinational: return "multinational";
    case Scope::Regional: return "regional";
    case Scope::Unclassified: return "unclassified";
  }
  return "unclassified";
}

Scope scope_from_string(std::string_view s) {
  for (auto v : {Scope::Ocean, Scope::Global, Scope::Continental, Scope::Country, Scope::Multinational,
                 Scope::Regional, Scope::Unclassified}) {
    if (to_string(v) == s) return v;
  }
  throw ValidationError("unknown spatial scope '" + std::string(s) + "'");
}

Scope classify_scope(std::size_t country_count, std::size_t continent_count, bool intersect_empty,
                     const ScopeOptions& options) {
  if (intersect_empty || country_count == 0) return Scope::Ocean;
  if (continent_count > 1) return Scope::Global;
  if (country_count == 1) return Scope::Country;
  if (country_count <= 3) return Scope::Regional;
  return options.multinational ? Scope::Multinational : Scope::Continental;
}

Scope classify_scope(const std::set<std::string>& countries, const std::set<std::string>& continents,
                     bool intersect_empty, const ScopeOptions& options) {
  return classify_scope(countries.size(), continents.size(), intersect_empty, options);
}

GeoFootprint classify_footprint(const std::optional<Geometry>& g, const BoundarySet* boundaries,
                                const ScopeOptions& options) {
  GeoFootprint out;
  if (!g || g->is_none()) return out;
  out.geometry = *g;
  if (boundaries == nullptr) {
    spdlog::warn("geo: no boundary data loaded; footprint left unclassified");
    return out;
  }
  for (std::size_t i : candidate_boundaries(*g, *boundaries)) {
    const auto& entry = boundaries->entries()[i];
    if (bg::intersects(g->parts, entry.geometry.parts)) {
      out.countries.insert(entry.name);
      out.continents.insert(entry.continent);
    }
  }
  out.scope = classify_scope(out.countries, out.continents, out.countries.empty(), options);
  return out;
}

json to_json(const GeoFootprint& f) {
  return json{{"geometry", f.geometry ? to_geojson(*f.geometry) : json(nullptr)},
              {"countries", f.countries},
              {"continents", f.continents},
              {"scope", std::string(to_string(f.scope))}};
}

GeoFootprint footprint_from_json(const json& j) {
  GeoFootprint f;
  if (auto it = j.find("geometry"); it != j.end() && !it->is_null()) f.geometry = geometry_from_geojson(*it);
  f.countries = j.value("countries", std::set<std::string>{});
  f.continents = j.value("continents", std::set<std::string>{});
  f.scope = scope_from_string(j.value("scope", std::string("unclassified")));
  return f;
}

namespace {

std::vector<double> numbers_in(std::string_view s) {
  std::vector<double> out;
  for (const auto& tok : text::split_whitespace(s)) {
    for (const auto& piece : text::split(tok, ',')) {
      if (piece.empty()) continue;
      auto v = parse_double(piece);
      if (!v) throw ValidationError("non-numeric coordinate '" + piece + "'");
      out.push_back(*v);
    }
  }
  return out;
}

double number_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(std::string("missing ") + key);
  if (it->is_number()) return it->get<double>();
  if (it->is_string()) {
    if (auto v = parse_double(it->get_ref<const std::string&>())) return *v;
  }
  throw ValidationError(std::string("non-numeric ") + key);
}

void note(std::vector<std::string>* diagnostics, const std::string& concept_id, const std::string& msg) {
  spdlog::warn("geo: {}: {}", concept_id, msg);
  if (diagnostics) diagnostics->push_back(msg);
}

// UMM SpatialExtent.HorizontalSpatialDomain.Geometry
void collect_umm(const json& extent, ShapeCollection& shapes, std::vector<Geometry>& boxes,
                 const GeometryOptions& options, const std::string& id, std::vector<std::string>* diagnostics) {
  const json* geom = &extent;
  for (const char* key : {"HorizontalSpatialDomain", "Geometry"}) {
    auto it = geom->find(key);
    if (it == geom->end()) return;
    geom = &*it;
  }
  if (auto it = geom->find("BoundingRectangles"); it != geom->end()) {
    for (const auto& r : *it) {
      try {
        boxes.push_back(bbox_to_polygon(number_field(r, "SouthBoundingCoordinate"),
                                        number_field(r, "WestBoundingCoordinate"),
                                        number_field(r, "NorthBoundingCoordinate"),
                                        number_field(r, "EastBoundingCoordinate"), options));
      } catch (const ValidationError& e) {
        note(diagnostics, id, e.what());
      }
    }
  }
  if (auto it = geom->find("GPolygons"); it != geom->end()) {
    for (const auto& gp : *it) {
      try {
        std::vector<double> flat;
        for (const auto& pt : gp.at("Boundary").at("Points")) {
          flat.push_back(number_field(pt, "Latitude"));
          flat.push_back(number_field(pt, "Longitude"));
        }
        auto g = parse_polygon_coords(flat);
        shapes.polygons.push_back(g.parts.front());
      } catch (const std::exception& e) {
        note(diagnostics, id, e.what());
      }
    }
  }
  if (auto it = geom->find("Points"); it != geom->end()) {
    for (const auto& pt : *it) {
      try {
        shapes.points.emplace_back(number_field(pt, "Longitude"), number_field(pt, "Latitude"));
      } catch (const ValidationError& e) {
        note(diagnostics, id, e.what());
      }
    }
  }
}

// JSON feed: boxes "s w n e", polygons [["lat lon lat lon ..."]], points "lat lon".
void collect_feed(const ingest::HarmonizedRecord& record, ShapeCollection& shapes, std::vector<Geometry>& boxes,
                  const GeometryOptions& options, std::vector<std::string>* diagnostics) {
  const auto& id = record.concept_id;
  if (const json* b = record.get("Boxes"); b && b->is_array()) {
    for (const auto& s : *b) {
      try {
        auto v = numbers_in(s.get<std::string>());
        if (v.size() != 4) throw ValidationError("box needs 4 numbers, got " + std::to_string(v.size()));
        boxes.push_back(bbox_to_polygon(v[0], v[1], v[2], v[3], options));
      } catch (const std::exception& e) {
        note(diagnostics, id, e.what());
      }
    }
  }
  if (const json* p = record.get("Polygons"); p && p->is_array()) {
    for (const auto& poly : *p) {
      try {
        // A polygon is a list of ring strings (outer first) or a bare string.
        std::vector<std::string> rings;
        if (poly.is_string()) {
          rings.push_back(poly.get<std::string>());
        } else {
          for (const auto& r : poly) rings.push_back(r.get<std::string>());
        }
        if (rings.empty()) continue;
        auto outer = parse_polygon_coords(numbers_in(rings[0]));
        Polygon polygon = outer.parts.front();
        for (std::size_t i = 1; i < rings.size(); ++i) {
          polygon.inners().push_back(parse_polygon_coords(numbers_in(rings[i])).parts.front().outer());
        }
        shapes.polygons.push_back(std::move(polygon));
      } catch (const std::exception& e) {
        note(diagnostics, id, e.what());
      }
    }
  }
  if (const json* pts = record.get("Points"); pts && pts->is_array()) {
    for (const auto& s : *pts) {
      try {
        auto v = numbers_in(s.get<std::string>());
        if (v.size() != 2) throw ValidationError("point needs 2 numbers");
        shapes.points.emplace_back(normalize_longitude(v[1]), v[0]);
      } catch (const std::exception& e) {
        note(diagnostics, id, e.what());
      }
    }
  }
}

}  // namespace

std::optional<Geometry> standardize_record_geometry(const ingest::HarmonizedRecord& record,
                                                    const GeometryOptions& options,
                                                    std::vector<std::string>* diagnostics) {
  ShapeCollection shapes;
  std::vector<Geometry> boxes;
  if (const json* extent = record.get("SpatialExtent"); extent && extent->is_object()) {
    collect_umm(*extent, shapes, boxes, options, record.concept_id, diagnostics);
  }
  if (shapes.polygons.empty() && shapes.points.empty() && boxes.empty()) {
    collect_feed(record, shapes, boxes, options, diagnostics);
  }

  std::vector<Geometry> all = std::move(boxes);
  for (auto& p : shapes.polygons) all.push_back(Geometry::from_polygon(std::move(p)));
  if (all.empty()) return std::nullopt;  // points only: nothing polygonal to keep
  auto unified = unify_shapes(all);
  if (!unified) return std::nullopt;
  return extract_valid_geometry(*unified);
}

}  // namespace climkg::geo
