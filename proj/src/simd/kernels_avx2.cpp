// Compiled with -mavx2 (no -mfma); only reached after a runtime CPU check.

#include "polc/simd/kernels.hpp"
#include "kernels_internal.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace polc::simd {

namespace {

inline __m256d negate(__m256d v) { return _mm256_xor_pd(v, _mm256_set1_pd(-0.0)); }
inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

void points_in_polygon_avx2(std::span<const double> px, std::span<const double> py,
                            RingView ring, std::span<std::uint8_t> inside) {
  const std::size_t n = ring.xs.size();
  const std::size_t count = px.size();
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256d x = _mm256_loadu_pd(px.data() + k);
    const __m256d y = _mm256_loadu_pd(py.data() + k);
    __m256d parity = _mm256_setzero_pd();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const __m256d xi = _mm256_set1_pd(ring.xs[i]);
      const __m256d yi = _mm256_set1_pd(ring.ys[i]);
      const __m256d xj = _mm256_set1_pd(ring.xs[j]);
      const __m256d yj = _mm256_set1_pd(ring.ys[j]);
      const __m256d above_i = _mm256_cmp_pd(yi, y, _CMP_GT_OQ);
      const __m256d above_j = _mm256_cmp_pd(yj, y, _CMP_GT_OQ);
      const __m256d straddles = _mm256_xor_pd(above_i, above_j);
      const __m256d cross = _mm256_add_pd(
          _mm256_div_pd(_mm256_mul_pd(_mm256_sub_pd(xj, xi), _mm256_sub_pd(y, yi)),
                        _mm256_sub_pd(yj, yi)),
          xi);
      const __m256d left = _mm256_cmp_pd(x, cross, _CMP_LT_OQ);
      parity = _mm256_xor_pd(parity, _mm256_and_pd(straddles, left));
    }
    const int mask = _mm256_movemask_pd(parity);
    for (int lane = 0; lane < 4; ++lane) inside[k + lane] = (mask >> lane) & 1;
  }
  if (k < count) {
    scalar_kernels().points_in_polygon(px.subspan(k), py.subspan(k), ring, inside.subspan(k));
  }
}

void axial_round_avx2(std::span<const double> px, std::span<const double> py, double edge,
                      std::span<double> q, std::span<double> r) {
  const std::size_t count = px.size();
  const __m256d c_sqrt3 = _mm256_set1_pd(kSqrt3Over3);
  const __m256d c_third = _mm256_set1_pd(kOneThird);
  const __m256d c_two_thirds = _mm256_set1_pd(kTwoThirds);
  const __m256d e = _mm256_set1_pd(edge);
  constexpr int kRound = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256d x = _mm256_loadu_pd(px.data() + k);
    const __m256d y = _mm256_loadu_pd(py.data() + k);
    const __m256d fq =
        _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(c_sqrt3, x), _mm256_mul_pd(c_third, y)), e);
    const __m256d fr = _mm256_div_pd(_mm256_mul_pd(c_two_thirds, y), e);
    const __m256d fs = _mm256_sub_pd(negate(fq), fr);
    const __m256d rq = _mm256_round_pd(fq, kRound);
    const __m256d rr = _mm256_round_pd(fr, kRound);
    const __m256d rs = _mm256_round_pd(fs, kRound);
    const __m256d dq = abs_pd(_mm256_sub_pd(rq, fq));
    const __m256d dr = abs_pd(_mm256_sub_pd(rr, fr));
    const __m256d ds = abs_pd(_mm256_sub_pd(rs, fs));
    const __m256d fix_q =
        _mm256_and_pd(_mm256_cmp_pd(dq, dr, _CMP_GT_OQ), _mm256_cmp_pd(dq, ds, _CMP_GT_OQ));
    const __m256d fix_r = _mm256_andnot_pd(fix_q, _mm256_cmp_pd(dr, ds, _CMP_GT_OQ));
    const __m256d out_q = _mm256_blendv_pd(rq, _mm256_sub_pd(negate(rr), rs), fix_q);
    const __m256d out_r = _mm256_blendv_pd(rr, _mm256_sub_pd(negate(rq), rs), fix_r);
    _mm256_storeu_pd(q.data() + k, out_q);
    _mm256_storeu_pd(r.data() + k, out_r);
  }
  if (k < count) {
    scalar_kernels().axial_round(px.subspan(k), py.subspan(k), edge, q.subspan(k), r.subspan(k));
  }
}

void squared_distance_avx2(std::span<const double> px, std::span<const double> py, double cx,
                           double cy, std::span<double> out) {
  const std::size_t count = px.size();
  const __m256d vx = _mm256_set1_pd(cx);
  const __m256d vy = _mm256_set1_pd(cy);
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(px.data() + k), vx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(py.data() + k), vy);
    _mm256_storeu_pd(out.data() + k,
                     _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
  }
  if (k < count) {
    scalar_kernels().squared_distance(px.subspan(k), py.subspan(k), cx, cy, out.subspan(k));
  }
}

}  // namespace

const KernelTable* avx2_table_if_compiled() {
  static const KernelTable table{"avx2", &points_in_polygon_avx2, &axial_round_avx2,
                                 &squared_distance_avx2};
  return &table;
}

}  // namespace polc::simd

#else

namespace polc::simd {
const KernelTable* avx2_table_if_compiled() { return nullptr; }
}  // namespace polc::simd

#endif
