#pragma once

// Schnorr signatures over an abstract prime-order group.
//
// Two groups ship: ristretto255 (cryptographic, via libsodium) and the order-7
// subgroup of F_p^* for p = 2^61 - 1, small enough to enumerate exhaustively
// and to express inside an m61 circuit.
//
//   nonce      k = H(tag_k || sk || msg) mod q     (k = 0 is replaced by 1)
//   commitment R = g^k
//   challenge  c = H(tag_c || R || pk || msg) mod q
//   response   z = k + c * sk mod q
//   verify     g^z == R * pk^c

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "polc/bytes.hpp"

namespace polc {

using Scalar = std::array<std::uint8_t, 32>;   // little-endian
using Element = std::array<std::uint8_t, 32>;  // group-specific encoding

class SchnorrGroup {
 public:
  virtual ~SchnorrGroup() = default;
  virtual std::string_view id() const = 0;

  /// Uniform-ish reduction of 64 bytes to a scalar.
  virtual Scalar reduce(std::span<const std::uint8_t, 64> wide) const = 0;
  virtual Scalar add(const Scalar& a, const Scalar& b) const = 0;
  virtual Scalar mul(const Scalar& a, const Scalar& b) const = 0;
  virtual bool is_zero(const Scalar& s) const = 0;
  virtual bool is_canonical(const Scalar& s) const = 0;

  virtual Element identity() const = 0;
  virtual Element generator() const = 0;
  virtual Element base_mul(const Scalar& s) const = 0;
  virtual Element scale(const Element& e, const Scalar& s) const = 0;  // e^s
  virtual Element combine(const Element& a, const Element& b) const = 0;  // group operation
  virtual bool is_valid(const Element& e) const = 0;
};

/// Order-7 subgroup of F_{2^61-1}^*; elements are 32-byte big-endian field values.
class TestGroup7 final : public SchnorrGroup {
 public:
  static constexpr std::uint64_t kOrder = 7;
  static constexpr std::uint64_t kGenerator = 69203453413471971ULL;  // 3^((p-1)/7)

  std::string_view id() const override { return "test7"; }
  Scalar reduce(std::span<const std::uint8_t, 64> wide) const override;
  Scalar add(const Scalar& a, const Scalar& b) const override;
  Scalar mul(const Scalar& a, const Scalar& b) const override;
  bool is_zero(const Scalar& s) const override { return s[0] % kOrder == 0; }
  bool is_canonical(const Scalar& s) const override;
  Element identity() const override;
  Element generator() const override;
  Element base_mul(const Scalar& s) const override;
  Element scale(const Element& e, const Scalar& s) const override;
  Element combine(const Element& a, const Element& b) const override;
  bool is_valid(const Element& e) const override;

  static Scalar scalar(std::uint64_t v);
  static std::uint64_t value(const Scalar& s) { return s[0] % kOrder; }
  static std::uint64_t element_value(const Element& e);
};

class Ristretto255Group final : public SchnorrGroup {
 public:
  Ristretto255Group();
  std::string_view id() const override { return "ristretto255"; }
  Scalar reduce(std::span<const std::uint8_t, 64> wide) const override;
  Scalar add(const Scalar& a, const Scalar& b) const override;
  Scalar mul(const Scalar& a, const Scalar& b) const override;
  bool is_zero(const Scalar& s) const override;
  bool is_canonical(const Scalar& s) const override;
  Element identity() const override { return Element{}; }
  Element generator() const override;
  Element base_mul(const Scalar& s) const override;
  Element scale(const Element& e, const Scalar& s) const override;
  Element combine(const Element& a, const Element& b) const override;
  bool is_valid(const Element& e) const override;
};

const SchnorrGroup& group_by_id(std::string_view id);  // throws FormatError
const SchnorrGroup& default_group();                   // ristretto255

struct Keypair {
  Scalar sk{};
  Element pk{};
};

struct Signature {
  Element R{};
  Scalar z{};
  bool operator==(const Signature&) const = default;

  Bytes to_bytes() const;  // R || z
  static Signature from_bytes(std::span<const std::uint8_t> bytes);  // throws FormatError
};

/// Deterministic keypair; equal seeds give equal keys. Never returns sk = 0.
Keypair keygen(const SchnorrGroup& group, std::span<const std::uint8_t> seed);
Keypair keygen(const SchnorrGroup& group, std::uint64_t seed);

Scalar schnorr_challenge(const SchnorrGroup& group, const Element& R, const Element& pk,
                         std::span<const std::uint8_t> msg);
Scalar schnorr_nonce(const SchnorrGroup& group, const Scalar& sk, std::span<const std::uint8_t> msg);

Signature sign(const SchnorrGroup& group, const Keypair& kp, std::span<const std::uint8_t> msg);
bool verify(const SchnorrGroup& group, const Element& pk, std::span<const std::uint8_t> msg,
            const Signature& sig);

}  // namespace polc
