#pragma once

// Prime fields used as constraint-system substrates.
//
//   Fp61  : p = 2^61 - 1, the small test profile (fast, native 128-bit products)
//   Fp254 : BN254 scalar field, the cryptographic profile (4x64 Montgomery)
//
// Both expose the same surface so gadgets and synthesis are written once as
// templates over `PrimeField`.

#include <array>
#include <compare>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace polc::ff {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

class Fp61 {
 public:
  static constexpr u64 kModulus = (u64{1} << 61) - 1;
  static constexpr std::string_view kName = "m61";
  static constexpr unsigned kBits = 61;
  /// Smallest alpha >= 3 with gcd(alpha, p - 1) = 1; x -> x^alpha is a permutation.
  static constexpr unsigned kSboxDegree = 17;

  constexpr Fp61() = default;

  static constexpr Fp61 zero() { return Fp61(); }
  static constexpr Fp61 one() { return from_u64(1); }
  static constexpr Fp61 from_u64(u64 v) {
    Fp61 r;
    r.v_ = reduce128(v);
    return r;
  }
  static constexpr Fp61 from_i64(std::int64_t v) {
    if (v >= 0) return from_u64(static_cast<u64>(v));
    return -from_u64(static_cast<u64>(-(v + 1)) + 1);
  }
  /// Interprets `bytes` as a big-endian integer and reduces it mod p.
  static Fp61 from_bytes_be(std::span<const std::uint8_t> bytes) {
    Fp61 acc;
    const Fp61 base = from_u64(256);
    for (auto b : bytes) acc = acc * base + from_u64(b);
    return acc;
  }
  /// Canonical 32-byte big-endian encoding.
  std::array<std::uint8_t, 32> to_bytes_be() const {
    std::array<std::uint8_t, 32> out{};
    for (int i = 0; i < 8; ++i) out[31 - i] = static_cast<std::uint8_t>(v_ >> (8 * i));
    return out;
  }
  /// Canonical value as an integer when it fits in 64 bits (always, here).
  std::optional<u64> to_u64() const { return v_; }
  bool bit(unsigned i) const { return i < 64 && ((v_ >> i) & 1U); }
  std::string to_hex() const;
  static std::string modulus_hex();

  constexpr bool is_zero() const { return v_ == 0; }

  constexpr Fp61 operator+(Fp61 o) const {
    Fp61 r;
    u64 s = v_ + o.v_;
    r.v_ = s >= kModulus ? s - kModulus : s;
    return r;
  }
  constexpr Fp61 operator-(Fp61 o) const {
    Fp61 r;
    r.v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + kModulus - o.v_;
    return r;
  }
  constexpr Fp61 operator-() const { return Fp61() - *this; }
  constexpr Fp61 operator*(Fp61 o) const {
    Fp61 r;
    r.v_ = reduce128(static_cast<u128>(v_) * o.v_);
    return r;
  }
  constexpr Fp61& operator+=(Fp61 o) { return *this = *this + o; }
  constexpr Fp61& operator-=(Fp61 o) { return *this = *this - o; }
  constexpr Fp61& operator*=(Fp61 o) { return *this = *this * o; }
  constexpr bool operator==(const Fp61&) const = default;

  constexpr Fp61 pow(u64 e) const {
    Fp61 base = *this, acc = one();
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }
  /// Multiplicative inverse; inverse of zero is zero.
  constexpr Fp61 inverse() const { return pow(kModulus - 2); }

 private:
  static constexpr u64 reduce128(u128 x) {
    u64 lo = static_cast<u64>(x & kModulus);
    u128 hi = x >> 61;
    u128 s = static_cast<u128>(lo) + hi;
    // s < 2^68 after one fold; fold again.
    u64 t = static_cast<u64>(s & kModulus) + static_cast<u64>(s >> 61);
    while (t >= kModulus) t -= kModulus;
    return t;
  }

  u64 v_ = 0;
};

class Fp254 {
 public:
  using Limbs = std::array<u64, 4>;
  static constexpr Limbs kModulus = {0x43e1f593f0000001ULL, 0x2833e84879b97091ULL,
                                     0xb85045b68181585dULL, 0x30644e72e131a029ULL};
  static constexpr std::string_view kName = "bn254";
  static constexpr unsigned kBits = 254;
  static constexpr unsigned kSboxDegree = 5;

  constexpr Fp254() = default;

  static constexpr Fp254 zero() { return Fp254(); }
  static constexpr Fp254 one() {
    Fp254 r;
    r.m_ = kR;
    return r;
  }
  static constexpr Fp254 from_u64(u64 v) { return from_canonical({v, 0, 0, 0}); }
  static constexpr Fp254 from_i64(std::int64_t v) {
    if (v >= 0) return from_u64(static_cast<u64>(v));
    return -from_u64(static_cast<u64>(-(v + 1)) + 1);
  }
  static Fp254 from_bytes_be(std::span<const std::uint8_t> bytes) {
    Fp254 acc;
    std::size_t pos = 0;
    if (bytes.size() > 32) {  // rare: fold leading bytes in one at a time
      const Fp254 base = from_u64(256);
      for (; pos < bytes.size() - 32; ++pos) acc = acc * base + from_u64(bytes[pos]);
      for (int i = 0; i < 32; ++i) acc *= base;
    }
    Limbs limbs{};
    const std::size_t n = bytes.size() - pos;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t bit = 8 * (n - 1 - k);
      limbs[bit / 64] |= static_cast<u64>(bytes[pos + k]) << (bit % 64);
    }
    while (!less_than_modulus(limbs)) limbs = sub_modulus(limbs);  // at most 5 rounds: 2^256 < 6p
    return acc + from_canonical(limbs);
  }
  /// `limbs` must already be < p (little-endian 64-bit limbs).
  static constexpr Fp254 from_canonical(const Limbs& limbs) {
    Fp254 a;
    a.m_ = limbs;
    Fp254 r2;
    r2.m_ = kR2;
    return a * r2;
  }
  constexpr Limbs canonical() const {
    Fp254 t;
    t.m_ = {1, 0, 0, 0};
    return (*this * t).m_;
  }
  std::array<std::uint8_t, 32> to_bytes_be() const {
    auto c = canonical();
    std::array<std::uint8_t, 32> out{};
    for (int limb = 0; limb < 4; ++limb)
      for (int i = 0; i < 8; ++i)
        out[31 - (limb * 8 + i)] = static_cast<std::uint8_t>(c[limb] >> (8 * i));
    return out;
  }
  std::optional<u64> to_u64() const {
    auto c = canonical();
    if (c[1] || c[2] || c[3]) return std::nullopt;
    return c[0];
  }
  bool bit(unsigned i) const {
    if (i >= 256) return false;
    return (canonical()[i / 64] >> (i % 64)) & 1U;
  }
  std::string to_hex() const;
  static std::string modulus_hex();

  constexpr bool is_zero() const { return m_ == Limbs{}; }

  constexpr Fp254 operator+(const Fp254& o) const {
    Fp254 r;
    u64 carry = 0;
    for (int i = 0; i < 4; ++i) {
      u128 s = static_cast<u128>(m_[i]) + o.m_[i] + carry;
      r.m_[i] = static_cast<u64>(s);
      carry = static_cast<u64>(s >> 64);
    }
    r.m_ = reduce_once(r.m_);
    return r;
  }
  constexpr Fp254 operator-(const Fp254& o) const {
    Fp254 r;
    u64 borrow = 0;
    for (int i = 0; i < 4; ++i) {
      u128 d = static_cast<u128>(m_[i]) - o.m_[i] - borrow;
      r.m_[i] = static_cast<u64>(d);
      borrow = static_cast<u64>(d >> 64) & 1U;
    }
    if (borrow) {
      u64 carry = 0;
      for (int i = 0; i < 4; ++i) {
        u128 s = static_cast<u128>(r.m_[i]) + kModulus[i] + carry;
        r.m_[i] = static_cast<u64>(s);
        carry = static_cast<u64>(s >> 64);
      }
    }
    return r;
  }
  constexpr Fp254 operator-() const { return Fp254() - *this; }
  /// Montgomery product, CIOS without the extra carry word: the top limb of p
  /// is below 2^62, so intermediate sums fit in four limbs.
  constexpr Fp254 operator*(const Fp254& o) const {
    u64 t0 = 0, t1 = 0, t2 = 0, t3 = 0;
#pragma GCC unroll 4
    for (int i = 0; i < 4; ++i) {
      const u64 b = o.m_[i];
      u128 a = static_cast<u128>(m_[0]) * b + t0;
      const u64 lo = static_cast<u64>(a);
      const u64 m = lo * kInv;
      u128 c = static_cast<u128>(m) * kModulus[0] + lo;

      a = static_cast<u128>(m_[1]) * b + t1 + static_cast<u64>(a >> 64);
      c = static_cast<u128>(m) * kModulus[1] + static_cast<u64>(a) + static_cast<u64>(c >> 64);
      t0 = static_cast<u64>(c);

      a = static_cast<u128>(m_[2]) * b + t2 + static_cast<u64>(a >> 64);
      c = static_cast<u128>(m) * kModulus[2] + static_cast<u64>(a) + static_cast<u64>(c >> 64);
      t1 = static_cast<u64>(c);

      a = static_cast<u128>(m_[3]) * b + t3 + static_cast<u64>(a >> 64);
      c = static_cast<u128>(m) * kModulus[3] + static_cast<u64>(a) + static_cast<u64>(c >> 64);
      t2 = static_cast<u64>(c);
      t3 = static_cast<u64>(c >> 64) + static_cast<u64>(a >> 64);
    }
    Fp254 r;
    r.m_ = reduce_once({t0, t1, t2, t3});
    return r;
  }
  constexpr Fp254& operator+=(const Fp254& o) { return *this = *this + o; }
  constexpr Fp254& operator-=(const Fp254& o) { return *this = *this - o; }
  constexpr Fp254& operator*=(const Fp254& o) { return *this = *this * o; }
  constexpr bool operator==(const Fp254&) const = default;

  constexpr Fp254 pow(u64 e) const {
    Fp254 base = *this, acc = one();
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }
  constexpr Fp254 pow_limbs(const Limbs& e) const {
    Fp254 acc = one();
    for (int limb = 3; limb >= 0; --limb)
      for (int i = 63; i >= 0; --i) {
        acc *= acc;
        if ((e[limb] >> i) & 1U) acc *= *this;
      }
    return acc;
  }
  constexpr Fp254 inverse() const {
    Limbs e = kModulus;
    e[0] -= 2;
    return pow_limbs(e);
  }

 private:
  static constexpr Limbs kR = {0xac96341c4ffffffbULL, 0x36fc76959f60cd29ULL,
                               0x666ea36f7879462eULL, 0x0e0a77c19a07df2fULL};
  static constexpr Limbs kR2 = {0x1bb8e645ae216da7ULL, 0x53fe3ab1e35c59e3ULL,
                                0x8c49833d53bb8085ULL, 0x0216d0b17f4e44a5ULL};
  static constexpr u64 kInv = 0xc2e1f593efffffffULL;

  static constexpr bool less_than_modulus(const Limbs& a) {
    for (int i = 3; i >= 0; --i) {
      if (a[i] < kModulus[i]) return true;
      if (a[i] > kModulus[i]) return false;
    }
    return false;
  }
  /// a - p if a >= p, else a; branch-free. Requires a < 2p.
  static constexpr Limbs reduce_once(const Limbs& a) {
    Limbs d{};
    u64 borrow = 0;
    for (int i = 0; i < 4; ++i) {
      const u128 x = static_cast<u128>(a[i]) - kModulus[i] - borrow;
      d[i] = static_cast<u64>(x);
      borrow = static_cast<u64>(x >> 64) & 1U;
    }
    const u64 keep = 0 - borrow;  // all ones when a < p
    Limbs r{};
    for (int i = 0; i < 4; ++i) r[i] = (a[i] & keep) | (d[i] & ~keep);
    return r;
  }
  static constexpr Limbs sub_modulus(const Limbs& a) {
    Limbs r{};
    u64 borrow = 0;
    for (int i = 0; i < 4; ++i) {
      u128 d = static_cast<u128>(a[i]) - kModulus[i] - borrow;
      r[i] = static_cast<u64>(d);
      borrow = static_cast<u64>(d >> 64) & 1U;
    }
    return r;
  }

  Limbs m_{};  // Montgomery form
};

template <class F>
concept PrimeField = requires(F a, F b, std::uint64_t u, std::int64_t i, unsigned k) {
  { F::zero() } -> std::same_as<F>;
  { F::one() } -> std::same_as<F>;
  { F::from_u64(u) } -> std::same_as<F>;
  { F::from_i64(i) } -> std::same_as<F>;
  { a + b } -> std::same_as<F>;
  { a - b } -> std::same_as<F>;
  { a * b } -> std::same_as<F>;
  { -a } -> std::same_as<F>;
  { a.inverse() } -> std::same_as<F>;
  { a.bit(k) } -> std::same_as<bool>;
  { a.to_u64() } -> std::same_as<std::optional<std::uint64_t>>;
  { a.to_bytes_be() } -> std::same_as<std::array<std::uint8_t, 32>>;
  { a == b } -> std::same_as<bool>;
  { F::kName } -> std::convertible_to<std::string_view>;
  { F::kBits } -> std::convertible_to<unsigned>;
  { F::kSboxDegree } -> std::convertible_to<unsigned>;
};

static_assert(PrimeField<Fp61>);
static_assert(PrimeField<Fp254>);

/// Runtime selector for the two compiled-in field profiles.
enum class FieldProfile { m61, bn254 };

std::string_view to_string(FieldProfile p);
FieldProfile field_profile_from_string(std::string_view name);

template <class F>
constexpr FieldProfile profile_of();
template <>
constexpr FieldProfile profile_of<Fp61>() { return FieldProfile::m61; }
template <>
constexpr FieldProfile profile_of<Fp254>() { return FieldProfile::bn254; }

/// Calls `fn.template operator()<F>()` with the concrete field type for `p`.
template <class Fn>
decltype(auto) with_field(FieldProfile p, Fn&& fn) {
  if (p == FieldProfile::m61) return fn.template operator()<Fp61>();
  return fn.template operator()<Fp254>();
}

}  // namespace polc::ff
