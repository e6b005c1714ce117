#pragma once

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/box.hpp>
#include <boost/geometry/geometries/linestring.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <cstddef>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace climkg::ingest {
struct HarmonizedRecord;
}

namespace climkg::geo {

// Planar geographic degrees: x = longitude in [-180, 180], y = latitude in [-90, 90].
using Point = boost::geometry::model::d2::point_xy<double>;
using Polygon = boost::geometry::model::polygon<Point, /*clockwise=*/false, /*closed=*/true>;
using MultiPolygon = boost::geometry::model::multi_polygon<Polygon>;
using LineString = boost::geometry::model::linestring<Point>;
using Box = boost::geometry::model::box<Point>;

enum class GeometryKind { None, Polygon, MultiPolygon };

/// Standardized footprint. Rings are closed and have at least four points.
struct Geometry {
  GeometryKind kind = GeometryKind::None;
  MultiPolygon parts;

  static Geometry from_polygon(Polygon p);
  /// Polygon kind when `m` has exactly one member.
  static Geometry from_parts(MultiPolygon m);

  bool is_none() const { return kind == GeometryKind::None || parts.empty(); }
  Box bbox() const;
  double area() const;
};

/// Mixed shapes as they come out of parsing, before polygonal filtering.
struct ShapeCollection {
  std::vector<Polygon> polygons;
  std::vector<LineString> lines;
  std::vector<Point> points;
};

struct GeometryOptions {
  /// Zero-area boxes are rejected unless this is positive, in which case they
  /// are grown by this many degrees on every side.
  double degenerate_buffer_deg = 0.0;
};

double normalize_longitude(double lon);

/// `[south, west, north, east]` to a closed ring (w,s),(e,s),(e,n),(w,n),(w,s).
/// `west > east` crosses the antimeridian and yields two polygons.
Geometry bbox_to_polygon(double south, double west, double north, double east, const GeometryOptions& options = {});

/// Alternating latitude/longitude values; closes the ring when needed.
Geometry parse_polygon_coords(std::span<const double> coords);

/// None for no shapes, the shape itself for one, otherwise their union.
/// Shapes that stay invalid after repair are dropped with a warning.
std::optional<Geometry> unify_shapes(const std::vector<Geometry>& shapes);

/// Keeps valid polygonal content only; None when nothing polygonal remains.
std::optional<Geometry> extract_valid_geometry(const Geometry& geometry);
std::optional<Geometry> extract_valid_geometry(const ShapeCollection& collection);

/// Re-closes rings, drops consecutive duplicate vertices and fixes
/// orientation. Returns false if the polygon is still invalid.
bool repair_polygon(Polygon& polygon);

/// Reads the record's spatial extent (UMM bounding rectangles and GPolygons,
/// falling back to the JSON feed's `boxes`/`polygons`/`points`) and runs it
/// through standardization. Problems are appended to `diagnostics`.
std::optional<Geometry> standardize_record_geometry(const ingest::HarmonizedRecord& record,
                                                    const GeometryOptions& options,
                                                    std::vector<std::string>* diagnostics = nullptr);

nlohmann::json to_geojson(const Geometry& g);
Geometry geometry_from_geojson(const nlohmann::json& j);
std::string to_wkt(const Geometry& g);

struct BoundaryEntry {
  std::string name;
  std::string continent;
  Geometry geometry;
};

/// Immutable set of world boundaries with an R-tree over their bounding boxes.
class BoundarySet {
 public:
  /// Throws ValidationError on duplicate names or empty geometry.
  static BoundarySet build(std::vector<BoundaryEntry> entries);
  /// GeoJSON FeatureCollection with `name` and `continent` properties.
  static BoundarySet load_geojson(const std::filesystem::path& path);
  static BoundarySet from_geojson(const nlohmann::json& collection);

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<BoundaryEntry>& entries() const noexcept { return entries_; }
  const Box& bbox(std::size_t i) const { return boxes_.at(i); }
  std::size_t index_size() const { return tree_.size(); }

  /// Entries whose bounding box intersects `probe`, ascending.
  std::vector<std::size_t> query(const Box& probe) const;

  const std::string& continent_of(const std::string& name) const;

 private:
  using Value = std::pair<Box, std::size_t>;
  using Tree = boost::geometry::index::rtree<Value, boost::geometry::index::rstar<16>>;

  std::vector<BoundaryEntry> entries_;
  std::vector<Box> boxes_;
  std::map<std::string, std::string, std::less<>> continent_map_;
  Tree tree_;
};

/// Bounding-box prefilter: exactly the entries whose bbox meets bbox(g).
std::vector<std::size_t> candidate_boundaries(const Geometry& g, const BoundarySet& boundaries);

enum class Scope { Ocean, Global, Continental, Country, Multinational, Regional, Unclassified };
std::string_view to_string(Scope s);
Scope scope_from_string(std::string_view s);

struct ScopeOptions {
  /// Relabels the four-or-more-countries-on-one-continent case.
  bool multinational = false;
};

/// Precedence: ocean > global > country > regional > continental
/// (or multinational under the flag).
Scope classify_scope(std::size_t country_count, std::size_t continent_count, bool intersect_empty,
                     const ScopeOptions& options = {});
Scope classify_scope(const std::set<std::string>& countries, const std::set<std::string>& continents,
                     bool intersect_empty, const ScopeOptions& options = {});

struct GeoFootprint {
  std::optional<Geometry> geometry;
  std::set<std::string> countries;
  std::set<std::string> continents;
  Scope scope = Scope::Unclassified;
};

/// Countries are the candidates whose geometry touches or overlaps `g`.
/// Without geometry or boundary data the result is unclassified.
GeoFootprint classify_footprint(const std::optional<Geometry>& g, const BoundarySet* boundaries,
                                const ScopeOptions& options = {});

nlohmann::json to_json(const GeoFootprint& f);
GeoFootprint footprint_from_json(const nlohmann::json& j);

}  // namespace climkg::geo
