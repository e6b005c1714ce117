#include <spdlog/spdlog.h>

#include <cmath>
#include <sstream>

#include "climkg/error.hpp"
#include "climkg/geo.hpp"
#include "climkg/numeric_format.hpp"

namespace climkg::geo {

namespace bg = boost::geometry;
using nlohmann::json;

Geometry Geometry::from_polygon(Polygon p) {
  Geometry g;
  g.kind = GeometryKind::Polygon;
  g.parts.push_back(std::move(p));
  return g;
}

Geometry Geometry::from_parts(MultiPolygon m) {
  Geometry g;
  if (m.empty()) return g;
  g.kind = m.size() == 1 ? GeometryKind::Polygon : GeometryKind::MultiPolygon;
  g.parts = std::move(m);
  return g;
}

Box Geometry::bbox() const { return bg::return_envelope<Box>(parts); }

double Geometry::area() const { return is_none() ? 0.0 : bg::area(parts); }

double normalize_longitude(double lon) {
  if (lon >= -180.0 && lon <= 180.0) return lon;
  double r = std::fmod(lon + 180.0, 360.0);
  if (r < 0) r += 360.0;
  return r - 180.0;
}

namespace {

void check_latitude(double lat, const char* which) {
  if (!std::isfinite(lat) || lat < -90.0 || lat > 90.0) {
    throw ValidationError(std::string(which) + " latitude " + format_double(lat) + " outside [-90, 90]");
  }
}

void check_longitude(double lon, const char* which) {
  if (!std::isfinite(lon)) throw ValidationError(std::string(which) + " longitude is not finite");
}

Polygon rectangle(double w, double s, double e, double n) {
  Polygon p;
  auto& ring = p.outer();
  ring.push_back(Point(w, s));
  ring.push_back(Point(e, s));
  ring.push_back(Point(e, n));
  ring.push_back(Point(w, n));
  ring.push_back(Point(w, s));
  return p;
}

void close_ring(Polygon::ring_type& ring) {
  if (!ring.empty() && !bg::equals(ring.front(), ring.back())) ring.push_back(ring.front());
}

}  // namespace

Geometry bbox_to_polygon(double south, double west, double north, double east, const GeometryOptions& options) {
  check_latitude(south, "south");
  check_latitude(north, "north");
  check_longitude(west, "west");
  check_longitude(east, "east");
  if (south > north) {
    throw ValidationError("bounding box south " + format_double(south) + " exceeds north " + format_double(north));
  }
  west = normalize_longitude(west);
  east = normalize_longitude(east);

  if (south == north || west == east) {
    if (options.degenerate_buffer_deg <= 0.0) {
      throw ValidationError("degenerate bounding box [" + format_double(south) + "," + format_double(west) + "," +
                            format_double(north) + "," + format_double(east) + "] has zero area");
    }
    double b = options.degenerate_buffer_deg;
    if (south == north) {
      south = std::max(-90.0, south - b);
      north = std::min(90.0, north + b);
    }
    if (west == east) {
      west = std::max(-180.0, west - b);
      east = std::min(180.0, east + b);
    }
  }

  if (west > east) {
    MultiPolygon parts;
    if (west < 180.0) parts.push_back(rectangle(west, south, 180.0, north));
    if (east > -180.0) parts.push_back(rectangle(-180.0, south, east, north));
    return Geometry::from_parts(std::move(parts));
  }
  return Geometry::from_polygon(rectangle(west, south, east, north));
}

Geometry parse_polygon_coords(std::span<const double> coords) {
  if (coords.size() % 2 != 0) {
    throw ValidationError("polygon coordinates: odd value count " + std::to_string(coords.size()) + " (offset " +
                          std::to_string(coords.size() - 1) + " has no partner)");
  }
  if (coords.size() < 6) {
    throw ValidationError("polygon coordinates: fewer than 3 vertices (" + std::to_string(coords.size() / 2) + ")");
  }
  Polygon p;
  for (std::size_t k = 0; k < coords.size() / 2; ++k) {
    double lat = coords[2 * k];
    double lon = coords[2 * k + 1];
    if (!std::isfinite(lat) || lat < -90.0 || lat > 90.0) {
      throw ValidationError("polygon coordinates: latitude at offset " + std::to_string(2 * k) + " out of range");
    }
    if (!std::isfinite(lon)) {
      throw ValidationError("polygon coordinates: longitude at offset " + std::to_string(2 * k + 1) + " not finite");
    }
    p.outer().push_back(Point(normalize_longitude(lon), lat));
  }
  close_ring(p.outer());
  return Geometry::from_polygon(std::move(p));
}

bool repair_polygon(Polygon& polygon) {
  auto fix_ring = [](Polygon::ring_type& ring) {
    bg::unique(ring);
    close_ring(ring);
    return ring.size() >= 4;
  };
  if (!fix_ring(polygon.outer())) return false;
  for (auto& inner : polygon.inners()) {
    if (!fix_ring(inner)) return false;
  }
  bg::correct(polygon);
  return bg::is_valid(polygon);
}

namespace {

// Valid polygons of `m` after repair; invalid members are logged and dropped.
MultiPolygon repaired(const MultiPolygon& m) {
  MultiPolygon out;
  for (auto p : m) {
    if (repair_polygon(p)) {
      out.push_back(std::move(p));
    } else {
      std::ostringstream wkt;
      wkt << bg::wkt(p);
      spdlog::warn("geo: dropping invalid polygon {}", wkt.str());
    }
  }
  return out;
}

MultiPolygon union_all(const std::vector<MultiPolygon>& pieces) {
  MultiPolygon acc;
  for (const auto& piece : pieces) {
    if (piece.empty()) continue;
    if (acc.empty()) {
      acc = piece;
      continue;
    }
    MultiPolygon next;
    bg::union_(acc, piece, next);
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

std::optional<Geometry> unify_shapes(const std::vector<Geometry>& shapes) {
  std::vector<const Geometry*> present;
  for (const auto& s : shapes) {
    if (!s.is_none()) present.push_back(&s);
  }
  if (present.empty()) return std::nullopt;
  if (present.size() == 1) return *present.front();

  std::vector<MultiPolygon> pieces;
  for (const auto* s : present) {
    auto valid = repaired(s->parts);
    // A multi-part input may self-overlap; dissolve it piece by piece.
    for (auto& p : valid) pieces.push_back(MultiPolygon{std::move(p)});
  }
  auto merged = union_all(pieces);
  if (merged.empty()) return std::nullopt;
  return Geometry::from_parts(std::move(merged));
}

std::optional<Geometry> extract_valid_geometry(const Geometry& geometry) {
  if (geometry.is_none()) return std::nullopt;
  auto valid = repaired(geometry.parts);
  if (valid.empty()) return std::nullopt;
  if (valid.size() == geometry.parts.size() && bg::is_valid(valid)) {
    return Geometry::from_parts(std::move(valid));
  }
  std::vector<MultiPolygon> pieces;
  for (auto& p : valid) pieces.push_back(MultiPolygon{std::move(p)});
  auto merged = union_all(pieces);
  if (merged.empty()) return std::nullopt;
  return Geometry::from_parts(std::move(merged));
}

std::optional<Geometry> extract_valid_geometry(const ShapeCollection& collection) {
  if (collection.polygons.empty()) return std::nullopt;
  std::vector<Geometry> polys;
  for (const auto& p : collection.polygons) polys.push_back(Geometry::from_polygon(p));
  auto u = unify_shapes(polys);
  if (!u) return std::nullopt;
  return extract_valid_geometry(*u);
}

namespace {

json ring_to_json(const Polygon::ring_type& ring) {
  json arr = json::array();
  for (const auto& pt : ring) arr.push_back(json::array({pt.x(), pt.y()}));
  return arr;
}

json polygon_to_json(const Polygon& p) {
  json rings = json::array();
  rings.push_back(ring_to_json(p.outer()));
  for (const auto& inner : p.inners()) rings.push_back(ring_to_json(inner));
  return rings;
}

Polygon::ring_type ring_from_json(const json& arr) {
  Polygon::ring_type ring;
  for (const auto& pt : arr) {
    if (!pt.is_array() || pt.size() < 2) throw ValidationError("GeoJSON position must have two numbers");
    ring.push_back(Point(pt[0].get<double>(), pt[1].get<double>()));
  }
  close_ring(ring);
  return ring;
}

Polygon polygon_from_json(const json& rings) {
  Polygon p;
  if (!rings.is_array() || rings.empty()) throw ValidationError("GeoJSON polygon without rings");
  p.outer() = ring_from_json(rings[0]);
  for (std::size_t i = 1; i < rings.size(); ++i) p.inners().push_back(ring_from_json(rings[i]));
  return p;
}

void append_ring_wkt(std::string& out, const Polygon::ring_type& ring) {
  out.push_back('(');
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (i) out.append(", ");
    out.append(format_double(ring[i].x())).push_back(' ');
    out.append(format_double(ring[i].y()));
  }
  out.push_back(')');
}

void append_polygon_wkt(std::string& out, const Polygon& p) {
  out.push_back('(');
  append_ring_wkt(out, p.outer());
  for (const auto& inner : p.inners()) {
    out.append(", ");
    append_ring_wkt(out, inner);
  }
  out.push_back(')');
}

}  // namespace

json to_geojson(const Geometry& g) {
  if (g.is_none()) return nullptr;
  if (g.kind == GeometryKind::Polygon && g.parts.size() == 1) {
    return json{{"type", "Polygon"}, {"coordinates", polygon_to_json(g.parts.front())}};
  }
  json polys = json::array();
  for (const auto& p : g.parts) polys.push_back(polygon_to_json(p));
  return json{{"type", "MultiPolygon"}, {"coordinates", std::move(polys)}};
}

Geometry geometry_from_geojson(const json& j) {
  if (j.is_null()) return Geometry{};
  const auto& type = j.at("type").get_ref<const std::string&>();
  const auto& coords = j.at("coordinates");
  if (type == "Polygon") return Geometry::from_polygon(polygon_from_json(coords));
  if (type == "MultiPolygon") {
    Geometry g;
    g.kind = GeometryKind::MultiPolygon;
    for (const auto& rings : coords) g.parts.push_back(polygon_from_json(rings));
    if (g.parts.empty()) g.kind = GeometryKind::None;
    return g;
  }
  throw ValidationError("unsupported GeoJSON geometry type " + type);
}

std::string to_wkt(const Geometry& g) {
  if (g.is_none()) return "POLYGON EMPTY";
  std::string out;
  if (g.kind == GeometryKind::Polygon && g.parts.size() == 1) {
    out = "POLYGON ";
    append_polygon_wkt(out, g.parts.front());
    return out;
  }
  out = "MULTIPOLYGON (";
  for (std::size_t i = 0; i < g.parts.size(); ++i) {
    if (i) out.append(", ");
    append_polygon_wkt(out, g.parts[i]);
  }
  out.push_back(')');
  return out;
}

}  // namespace climkg::geo
