#pragma once

// Data-parallel geometry kernels behind a runtime-selected dispatch table.
//
// Every kernel has a scalar reference implementation; vector variants must
// produce bit-identical output (same operation order, no FMA contraction).
// Arrays are structure-of-arrays; all spans of one call have equal length.

#include <cstdint>
#include <span>
#include <string_view>

namespace polc::simd {

/// Polygon ring as separate coordinate arrays (implicitly closed).
struct RingView {
  std::span<const double> xs;
  std::span<const double> ys;
};

struct KernelTable {
  std::string_view name;

  /// inside[i] = 1 iff (px[i], py[i]) lies inside `ring` by the crossing-number
  /// rule: an edge counts when exactly one endpoint has y > py and the point is
  /// strictly left of the edge's crossing. Points on bottom/left edges count as
  /// inside, top/right as outside.
  void (*points_in_polygon)(std::span<const double> px, std::span<const double> py,
                            RingView ring, std::span<std::uint8_t> inside);

  /// Pointy-top axial cube rounding for hexes of circumradius `edge`:
  /// writes the rounded axial coordinates as doubles.
  void (*axial_round)(std::span<const double> px, std::span<const double> py, double edge,
                      std::span<double> q, std::span<double> r);

  /// out[i] = (px[i] - cx)^2 + (py[i] - cy)^2
  void (*squared_distance)(std::span<const double> px, std::span<const double> py, double cx,
                           double cy, std::span<double> out);
};

const KernelTable& scalar_kernels();

/// AVX2 table, or nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Table used by the library: AVX2 when available unless the environment
/// variable POLC_SIMD=scalar forces the reference path. Chosen once.
const KernelTable& kernels();

}  // namespace polc::simd
