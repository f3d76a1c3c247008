#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <vector>

#include "polc/simd/kernels.hpp"

namespace {

using polc::simd::KernelTable;

const KernelTable& vector_table() {
  const KernelTable* t = polc::simd::avx2_kernels();
  return t ? *t : polc::simd::scalar_kernels();
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

struct Points {
  std::vector<double> x, y;
};

/// Random points, plus points on ring vertices, edge midpoints and
/// half-integer axial positions where rounding ties occur.
Points sample_points(std::mt19937_64& rng, std::size_t n, const std::vector<double>& rx,
                     const std::vector<double>& ry) {
  Points p;
  std::uniform_real_distribution<double> u(-200, 200);
  for (std::size_t i = 0; i < n; ++i) {
    p.x.push_back(u(rng));
    p.y.push_back(u(rng));
  }
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const std::size_t j = (i + 1) % rx.size();
    p.x.push_back(rx[i]);
    p.y.push_back(ry[i]);
    p.x.push_back((rx[i] + rx[j]) / 2);
    p.y.push_back((ry[i] + ry[j]) / 2);
  }
  for (int k = -6; k <= 6; ++k) {
    p.x.push_back(k * 0.5 * 30 * 1.7320508075688772);
    p.y.push_back(k * 0.75 * 30);
  }
  return p;
}

TEST(Simd, DispatchSelectsAKnownTable) {
  const auto& k = polc::simd::kernels();
  EXPECT_TRUE(k.name == "scalar" || k.name == "avx2");
  if (!polc::simd::avx2_kernels()) GTEST_SKIP() << "AVX2 not available; only the scalar table is exercised";
  EXPECT_EQ(polc::simd::avx2_kernels()->name, "avx2");
}

TEST(Simd, PointsInPolygonMatchesScalar) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-150, 150);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> rx, ry;
    const int nv = 3 + trial % 10;
    for (int i = 0; i < nv; ++i) {
      rx.push_back(trial % 3 == 0 ? std::round(u(rng)) : u(rng));
      ry.push_back(trial % 3 == 0 ? std::round(u(rng)) : u(rng));
    }
    auto pts = sample_points(rng, 1 + trial % 37, rx, ry);
    std::vector<std::uint8_t> a(pts.x.size()), b(pts.x.size());
    polc::simd::scalar_kernels().points_in_polygon(pts.x, pts.y, {rx, ry}, a);
    vector_table().points_in_polygon(pts.x, pts.y, {rx, ry}, b);
    ASSERT_EQ(a, b) << "trial " << trial;
  }
}

TEST(Simd, AxialRoundMatchesScalarBitForBit) {
  std::mt19937_64 rng(5);
  for (double edge : {30.0, 79.37253933193772, 1.0, 0.1}) {
    auto pts = sample_points(rng, 1003, {}, {});
    const std::size_t n = pts.x.size();
    std::vector<double> q1(n), r1(n), q2(n), r2(n);
    polc::simd::scalar_kernels().axial_round(pts.x, pts.y, edge, q1, r1);
    vector_table().axial_round(pts.x, pts.y, edge, q2, r2);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_TRUE(same_bits(q1[i], q2[i]) && same_bits(r1[i], r2[i]))
          << "point (" << pts.x[i] << ", " << pts.y[i] << ") edge " << edge;
    }
  }
}

TEST(Simd, SquaredDistanceMatchesScalarBitForBit) {
  std::mt19937_64 rng(9);
  for (std::size_t n : {0UL, 1UL, 3UL, 4UL, 5UL, 64UL, 1001UL}) {
    auto pts = sample_points(rng, n, {}, {});
    const std::size_t m = pts.x.size();
    std::vector<double> a(m), b(m);
    polc::simd::scalar_kernels().squared_distance(pts.x, pts.y, 12.5, -3.25, a);
    vector_table().squared_distance(pts.x, pts.y, 12.5, -3.25, b);
    for (std::size_t i = 0; i < m; ++i) ASSERT_TRUE(same_bits(a[i], b[i])) << i;
  }
}

TEST(Simd, ScalarKernelsAgainstDirectFormulas) {
  std::vector<double> x{0, 10, 5, -1}, y{0, 0, 5, 2};
  std::vector<double> rx{0, 10, 10, 0}, ry{0, 0, 10, 10};
  std::vector<std::uint8_t> in(4);
  polc::simd::scalar_kernels().points_in_polygon(x, y, {rx, ry}, in);
  // bottom-left boundary inside, right boundary outside
  EXPECT_EQ(in, (std::vector<std::uint8_t>{1, 0, 1, 0}));
  std::vector<double> d(4);
  polc::simd::scalar_kernels().squared_distance(x, y, 1, 1, d);
  EXPECT_EQ(d, (std::vector<double>{2, 82, 32, 5}));
}

}  // namespace
