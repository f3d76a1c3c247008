#include <cmath>

#include "polc/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace polc::simd {

namespace {

void points_in_polygon_scalar(std::span<const double> px, std::span<const double> py,
                              RingView ring, std::span<std::uint8_t> inside) {
  const std::size_t n = ring.xs.size();
  for (std::size_t k = 0; k < px.size(); ++k) {
    const double x = px[k], y = py[k];
    bool in = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const double xi = ring.xs[i], yi = ring.ys[i];
      const double xj = ring.xs[j], yj = ring.ys[j];
      if ((yi > y) != (yj > y)) {
        const double cross = (xj - xi) * (y - yi) / (yj - yi) + xi;
        if (x < cross) in = !in;
      }
    }
    inside[k] = in ? 1 : 0;
  }
}

void axial_round_scalar(std::span<const double> px, std::span<const double> py, double edge,
                        std::span<double> q, std::span<double> r) {
  for (std::size_t k = 0; k < px.size(); ++k) {
    const double fq = (kSqrt3Over3 * px[k] - kOneThird * py[k]) / edge;
    const double fr = (kTwoThirds * py[k]) / edge;
    const double fs = -fq - fr;
    double rq = std::nearbyint(fq);
    double rr = std::nearbyint(fr);
    const double rs = std::nearbyint(fs);
    const double dq = std::fabs(rq - fq);
    const double dr = std::fabs(rr - fr);
    const double ds = std::fabs(rs - fs);
    if (dq > dr && dq > ds) {
      rq = -rr - rs;
    } else if (dr > ds) {
      rr = -rq - rs;
    }
    q[k] = rq;
    r[k] = rr;
  }
}

void squared_distance_scalar(std::span<const double> px, std::span<const double> py, double cx,
                             double cy, std::span<double> out) {
  for (std::size_t k = 0; k < px.size(); ++k) {
    const double dx = px[k] - cx;
    const double dy = py[k] - cy;
    out[k] = dx * dx + dy * dy;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &points_in_polygon_scalar, &axial_round_scalar,
                                 &squared_distance_scalar};
  return table;
}

}  // namespace polc::simd
