#pragma once

namespace polc::simd {

// Shared literal constants so both paths round identically.
inline constexpr double kSqrt3Over3 = 0.57735026918962576451;
inline constexpr double kOneThird = 1.0 / 3.0;
inline constexpr double kTwoThirds = 2.0 / 3.0;

const struct KernelTable* avx2_table_if_compiled();

}  // namespace polc::simd
