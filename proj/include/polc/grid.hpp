#pragma once

// Flat hexagonal grid over a local planar projection.
//
// Cells are pointy-top hexagons addressed by axial (q, r). The cell centre is
//   x = edge * sqrt(3) * (q + r / 2),  y = edge * 1.5 * r
// where `edge` is the circumradius (edge length). Resolution 9 has a 30 m edge,
// i.e. a 60 m vertex-to-vertex diameter; each resolution step scales the edge
// by sqrt(7).

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace polc::grid {

struct Point {
  double x = 0;
  double y = 0;
  bool operator==(const Point&) const = default;
};

using Ring = std::vector<Point>;

struct CellId {
  std::int64_t q = 0;
  std::int64_t r = 0;
  int resolution = 0;

  /// Lexicographic on (resolution, q, r).
  friend constexpr std::strong_ordering operator<=>(const CellId& a, const CellId& b) {
    if (auto c = a.resolution <=> b.resolution; c != 0) return c;
    if (auto c = a.q <=> b.q; c != 0) return c;
    return a.r <=> b.r;
  }
  friend constexpr bool operator==(const CellId&, const CellId&) = default;
};

inline constexpr int kDefaultResolution = 9;

double edge_length_m(int resolution);

/// Resolution whose cell diameter is closest (log scale) to `precision_m`.
int resolution_for_precision(double precision_m);

class HexGrid {
 public:
  explicit HexGrid(int resolution = kDefaultResolution);
  /// Grid with an explicit edge length; `resolution` is only a tag on CellIds.
  static HexGrid with_edge(double edge_m, int resolution);

  int resolution() const { return resolution_; }
  double edge() const { return edge_; }
  double inradius() const;
  double diameter() const { return 2 * edge_; }

  /// The unique cell whose hexagon contains `p`; points equidistant from
  /// several centres go to the smallest CellId.
  CellId locate(Point p) const;
  std::vector<CellId> locate_batch(std::span<const Point> points) const;

  Point center(const CellId& c) const;
  std::array<Point, 6> corners(const CellId& c) const;
  std::array<CellId, 6> neighbors(const CellId& c) const;

 private:
  HexGrid(double edge, int resolution) : resolution_(resolution), edge_(edge) {}
  CellId refine(Point p, std::int64_t q, std::int64_t r) const;

  int resolution_;
  double edge_;
};

CellId locate(double x, double y, int resolution);

/// Crossing-number containment, same convention as the SIMD kernel.
bool point_in_polygon(Point p, std::span<const Point> ring);

double signed_area(std::span<const Point> ring);

enum class RasterRule {
  center,   // cell centre inside the polygon (default)
  overlap,  // any overlap between hexagon and polygon
};

/// Sorted cells of `polygon` under `rule`. Throws DegeneratePolygonError for
/// fewer than three vertices, non-finite coordinates or zero area.
std::vector<CellId> rasterize(std::span<const Point> polygon, const HexGrid& grid,
                              RasterRule rule = RasterRule::center);

/// Equirectangular projection of (lon, lat) degrees to metres east/north,
/// scaled at a reference latitude. x = R cos(ref) lon, y = R lat (radians).
struct LocalProjection {
  double ref_latitude_deg = 0;
  Point project(double lon_deg, double lat_deg) const;
};

}  // namespace polc::grid
