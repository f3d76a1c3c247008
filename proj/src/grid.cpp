#include "polc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polc/errors.hpp"
#include "polc/simd/kernels.hpp"

namespace polc::grid {

namespace {
constexpr double kSqrt3 = 1.73205080756887729353;
constexpr double kEarthRadiusM = 6371008.8;
constexpr double kPi = 3.14159265358979323846;

constexpr std::array<std::array<int, 2>, 6> kNeighborOffsets = {
    {{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}}};

double squared(double v) { return v * v; }
}  // namespace

double edge_length_m(int resolution) { return 30.0 * std::pow(std::sqrt(7.0), 9 - resolution); }

int resolution_for_precision(double precision_m) {
  int best = kDefaultResolution;
  double best_err = std::numeric_limits<double>::infinity();
  for (int res = 0; res <= 15; ++res) {
    const double err = std::fabs(std::log(2 * edge_length_m(res) / precision_m));
    if (err < best_err) {
      best_err = err;
      best = res;
    }
  }
  return best;
}

HexGrid::HexGrid(int resolution) : resolution_(resolution), edge_(edge_length_m(resolution)) {}

HexGrid HexGrid::with_edge(double edge_m, int resolution) { return HexGrid(edge_m, resolution); }

double HexGrid::inradius() const { return edge_ * kSqrt3 / 2; }

Point HexGrid::center(const CellId& c) const {
  const double q = static_cast<double>(c.q);
  const double r = static_cast<double>(c.r);
  return {edge_ * kSqrt3 * (q + r / 2), edge_ * 1.5 * r};
}

std::array<Point, 6> HexGrid::corners(const CellId& c) const {
  const Point ctr = center(c);
  std::array<Point, 6> out;
  for (int i = 0; i < 6; ++i) {
    const double angle = kPi / 180.0 * (60.0 * i - 30.0);
    out[i] = {ctr.x + edge_ * std::cos(angle), ctr.y + edge_ * std::sin(angle)};
  }
  return out;
}

std::array<CellId, 6> HexGrid::neighbors(const CellId& c) const {
  std::array<CellId, 6> out;
  for (int i = 0; i < 6; ++i)
    out[i] = {c.q + kNeighborOffsets[i][0], c.r + kNeighborOffsets[i][1], c.resolution};
  return out;
}

CellId HexGrid::refine(Point p, std::int64_t q, std::int64_t r) const {
  CellId best{q, r, resolution_};
  const Point c0 = center(best);
  double best_d = squared(p.x - c0.x) + squared(p.y - c0.y);
  for (const CellId& n : neighbors(best)) {
    const Point c = center(n);
    const double d = squared(p.x - c.x) + squared(p.y - c.y);
    if (d < best_d || (d == best_d && n < best)) {
      best = n;
      best_d = d;
    }
  }
  // cube rounding lands on the containing cell or one of its neighbours
  return best;
}

CellId HexGrid::locate(Point p) const {
  const std::array<double, 1> px{p.x}, py{p.y};
  std::array<double, 1> q{}, r{};
  simd::scalar_kernels().axial_round(px, py, edge_, q, r);
  return refine(p, static_cast<std::int64_t>(q[0]), static_cast<std::int64_t>(r[0]));
}

std::vector<CellId> HexGrid::locate_batch(std::span<const Point> points) const {
  const std::size_t n = points.size();
  std::vector<double> xs(n), ys(n), q(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = points[i].x;
    ys[i] = points[i].y;
  }
  simd::kernels().axial_round(xs, ys, edge_, q, r);
  std::vector<CellId> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = refine(points[i], static_cast<std::int64_t>(q[i]), static_cast<std::int64_t>(r[i]));
  return out;
}

CellId locate(double x, double y, int resolution) { return HexGrid(resolution).locate({x, y}); }

bool point_in_polygon(Point p, std::span<const Point> ring) {
  bool in = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < cross) in = !in;
    }
  }
  return in;
}

double signed_area(std::span<const Point> ring) {
  double acc = 0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    acc += ring[j].x * ring[i].y - ring[i].x * ring[j].y;
  return acc / 2;
}

namespace {

bool segments_intersect(Point a, Point b, Point c, Point d) {
  auto orient = [](Point p, Point q, Point r) {
    const double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    return (v > 0) - (v < 0);
  };
  auto on_segment = [](Point p, Point q, Point r) {
    return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) && std::min(p.y, r.y) <= q.y &&
           q.y <= std::max(p.y, r.y);
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, c, b)) return true;
  if (o2 == 0 && on_segment(a, d, b)) return true;
  if (o3 == 0 && on_segment(c, a, d)) return true;
  if (o4 == 0 && on_segment(c, b, d)) return true;
  return false;
}

bool hex_overlaps(const HexGrid& grid, const CellId& cell, std::span<const Point> polygon) {
  const auto hex = grid.corners(cell);
  for (const Point& v : hex)
    if (point_in_polygon(v, polygon)) return true;
  for (const Point& v : polygon)
    if (point_in_polygon(v, hex)) return true;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0, k = polygon.size() - 1; j < polygon.size(); k = j++)
      if (segments_intersect(hex[i], hex[(i + 1) % 6], polygon[k], polygon[j])) return true;
  return false;
}

}  // namespace

std::vector<CellId> rasterize(std::span<const Point> polygon, const HexGrid& grid,
                              RasterRule rule) {
  if (polygon.size() < 3) throw DegeneratePolygonError("polygon needs at least 3 vertices");
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (const Point& p : polygon) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw DegeneratePolygonError("polygon has non-finite coordinates");
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  if (signed_area(polygon) == 0.0) throw DegeneratePolygonError("polygon has zero area");

  const double e = grid.edge();
  const double pad = rule == RasterRule::overlap ? e : 0.0;
  xmin -= pad;
  xmax += pad;
  ymin -= pad;
  ymax += pad;

  const auto r_lo = static_cast<std::int64_t>(std::floor(ymin / (1.5 * e))) - 1;
  const auto r_hi = static_cast<std::int64_t>(std::ceil(ymax / (1.5 * e))) + 1;

  std::vector<CellId> candidates;
  std::vector<double> cx, cy;
  for (std::int64_t r = r_lo; r <= r_hi; ++r) {
    const double half = static_cast<double>(r) / 2;
    const auto q_lo = static_cast<std::int64_t>(std::floor(xmin / (kSqrt3 * e) - half)) - 1;
    const auto q_hi = static_cast<std::int64_t>(std::ceil(xmax / (kSqrt3 * e) - half)) + 1;
    for (std::int64_t q = q_lo; q <= q_hi; ++q) {
      const CellId c{q, r, grid.resolution()};
      const Point p = grid.center(c);
      candidates.push_back(c);
      cx.push_back(p.x);
      cy.push_back(p.y);
    }
  }

  std::vector<double> ring_x(polygon.size()), ring_y(polygon.size());
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    ring_x[i] = polygon[i].x;
    ring_y[i] = polygon[i].y;
  }
  std::vector<std::uint8_t> inside(candidates.size());
  simd::kernels().points_in_polygon(cx, cy, {ring_x, ring_y}, inside);

  std::vector<CellId> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (inside[i] || (rule == RasterRule::overlap && hex_overlaps(grid, candidates[i], polygon)))
      out.push_back(candidates[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Point LocalProjection::project(double lon_deg, double lat_deg) const {
  const double k = kPi / 180.0;
  return {kEarthRadiusM * std::cos(ref_latitude_deg * k) * lon_deg * k, kEarthRadiusM * lat_deg * k};
}

}  // namespace polc::grid
