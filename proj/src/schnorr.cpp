#include "polc/schnorr.hpp"

#include <algorithm>

#include "polc/errors.hpp"
#include "polc/field.hpp"
#include "polc/hash.hpp"

namespace polc {

namespace {

using ff::Fp61;

constexpr std::string_view kNonceTag = "polc/schnorr/nonce/v1";
constexpr std::string_view kChallengeTag = "polc/schnorr/challenge/v1";
constexpr std::string_view kKeygenTag = "polc/schnorr/keygen/v1";

Fp61 decode61(const Element& e) {
  std::uint64_t v = 0;
  for (int i = 24; i < 32; ++i) v = (v << 8) | e[i];
  return Fp61::from_u64(v);
}

Element encode61(Fp61 v) { return v.to_bytes_be(); }

std::array<std::uint8_t, 64> tagged_sha512(std::string_view tag,
                                           std::initializer_list<std::span<const std::uint8_t>> parts) {
  ByteWriter w;
  w.str(tag);
  for (auto p : parts) w.blob(p);
  return sha512(w.bytes());
}

}  // namespace

// ---- TestGroup7 -------------------------------------------------------------

Scalar TestGroup7::scalar(std::uint64_t v) {
  Scalar s{};
  s[0] = static_cast<std::uint8_t>(v % kOrder);
  return s;
}

std::uint64_t TestGroup7::element_value(const Element& e) {
  std::uint64_t v = 0;
  for (int i = 24; i < 32; ++i) v = (v << 8) | e[i];
  return v;
}

Scalar TestGroup7::reduce(std::span<const std::uint8_t, 64> wide) const {
  std::uint64_t acc = 0;
  for (std::size_t i = 64; i-- > 0;) acc = (acc * 256 + wide[i]) % kOrder;
  return scalar(acc);
}

Scalar TestGroup7::add(const Scalar& a, const Scalar& b) const {
  return scalar(value(a) + value(b));
}

Scalar TestGroup7::mul(const Scalar& a, const Scalar& b) const {
  return scalar(value(a) * value(b));
}

bool TestGroup7::is_canonical(const Scalar& s) const {
  return s[0] < kOrder && std::all_of(s.begin() + 1, s.end(), [](std::uint8_t b) { return b == 0; });
}

Element TestGroup7::identity() const { return encode61(Fp61::one()); }

Element TestGroup7::generator() const { return encode61(Fp61::from_u64(kGenerator)); }

Element TestGroup7::base_mul(const Scalar& s) const {
  return encode61(Fp61::from_u64(kGenerator).pow(value(s)));
}

Element TestGroup7::scale(const Element& e, const Scalar& s) const {
  return encode61(decode61(e).pow(value(s)));
}

Element TestGroup7::combine(const Element& a, const Element& b) const {
  return encode61(decode61(a) * decode61(b));
}

bool TestGroup7::is_valid(const Element& e) const {
  for (int i = 0; i < 24; ++i)
    if (e[i] != 0) return false;
  const std::uint64_t v = element_value(e);
  if (v == 0 || v >= Fp61::kModulus) return false;
  return Fp61::from_u64(v).pow(kOrder) == Fp61::one();
}

// ---- Ristretto255 -----------------------------------------------------------

Ristretto255Group::Ristretto255Group() { ensure_sodium(); }

Scalar Ristretto255Group::reduce(std::span<const std::uint8_t, 64> wide) const {
  Scalar s;
  crypto_core_ristretto255_scalar_reduce(s.data(), wide.data());
  return s;
}

Scalar Ristretto255Group::add(const Scalar& a, const Scalar& b) const {
  Scalar s;
  crypto_core_ristretto255_scalar_add(s.data(), a.data(), b.data());
  return s;
}

Scalar Ristretto255Group::mul(const Scalar& a, const Scalar& b) const {
  Scalar s;
  crypto_core_ristretto255_scalar_mul(s.data(), a.data(), b.data());
  return s;
}

bool Ristretto255Group::is_zero(const Scalar& s) const { return sodium_is_zero(s.data(), s.size()); }

bool Ristretto255Group::is_canonical(const Scalar& s) const {
  std::array<std::uint8_t, 64> wide{};
  std::copy(s.begin(), s.end(), wide.begin());
  return reduce(wide) == s;
}

Element Ristretto255Group::generator() const {
  Scalar one{};
  one[0] = 1;
  return base_mul(one);
}

Element Ristretto255Group::base_mul(const Scalar& s) const {
  Element e{};
  // returns -1 with an all-zero (identity) output for s = 0
  if (crypto_scalarmult_ristretto255_base(e.data(), s.data()) != 0) e.fill(0);
  return e;
}

Element Ristretto255Group::scale(const Element& p, const Scalar& s) const {
  Element e{};
  if (crypto_scalarmult_ristretto255(e.data(), s.data(), p.data()) != 0) e.fill(0);
  return e;
}

Element Ristretto255Group::combine(const Element& a, const Element& b) const {
  Element e{};
  if (crypto_core_ristretto255_add(e.data(), a.data(), b.data()) != 0)
    throw SignatureError("invalid ristretto255 encoding");
  return e;
}

bool Ristretto255Group::is_valid(const Element& e) const {
  return crypto_core_ristretto255_is_valid_point(e.data()) == 1;
}

// ---- registry -----------------------------------------------------------------

const SchnorrGroup& group_by_id(std::string_view id) {
  static const TestGroup7 test7;
  static const Ristretto255Group ristretto;
  if (id == test7.id()) return test7;
  if (id == ristretto.id()) return ristretto;
  throw FormatError("unknown group id '" + std::string(id) + "'");
}

const SchnorrGroup& default_group() { return group_by_id("ristretto255"); }

// ---- signatures ---------------------------------------------------------------

Bytes Signature::to_bytes() const {
  Bytes out(R.begin(), R.end());
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

Signature Signature::from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != 64) throw FormatError("signature must be 64 bytes");
  Signature s;
  std::copy_n(bytes.begin(), 32, s.R.begin());
  std::copy_n(bytes.begin() + 32, 32, s.z.begin());
  return s;
}

Keypair keygen(const SchnorrGroup& group, std::span<const std::uint8_t> seed) {
  Keypair kp;
  Bytes material(seed.begin(), seed.end());
  for (std::uint32_t attempt = 0;; ++attempt) {
    ByteWriter ctr;
    ctr.u32(attempt);
    kp.sk = group.reduce(tagged_sha512(kKeygenTag, {material, ctr.bytes()}));
    if (!group.is_zero(kp.sk)) break;
  }
  kp.pk = group.base_mul(kp.sk);
  return kp;
}

Keypair keygen(const SchnorrGroup& group, std::uint64_t seed) {
  ByteWriter w;
  w.u64(seed);
  return keygen(group, w.bytes());
}

Scalar schnorr_nonce(const SchnorrGroup& group, const Scalar& sk, std::span<const std::uint8_t> msg) {
  Scalar k = group.reduce(tagged_sha512(kNonceTag, {sk, msg}));
  if (group.is_zero(k)) {
    k = Scalar{};
    k[0] = 1;
  }
  return k;
}

Scalar schnorr_challenge(const SchnorrGroup& group, const Element& R, const Element& pk,
                         std::span<const std::uint8_t> msg) {
  return group.reduce(tagged_sha512(kChallengeTag, {R, pk, msg}));
}

Signature sign(const SchnorrGroup& group, const Keypair& kp, std::span<const std::uint8_t> msg) {
  const Scalar k = schnorr_nonce(group, kp.sk, msg);
  Signature sig;
  sig.R = group.base_mul(k);
  const Scalar c = schnorr_challenge(group, sig.R, kp.pk, msg);
  sig.z = group.add(k, group.mul(c, kp.sk));
  return sig;
}

bool verify(const SchnorrGroup& group, const Element& pk, std::span<const std::uint8_t> msg,
            const Signature& sig) {
  if (!group.is_valid(pk) || !group.is_valid(sig.R) || pk == group.identity()) return false;
  if (!group.is_canonical(sig.z)) return false;
  const Scalar c = schnorr_challenge(group, sig.R, pk, msg);
  return group.base_mul(sig.z) == group.combine(sig.R, group.scale(pk, c));
}

}  // namespace polc
