#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>

#include <sodium.h>

#include "polc/bytes.hpp"

namespace polc {

/// Idempotent libsodium initialisation; every crypto entry point calls it.
void ensure_sodium();

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);
/// Unkeyed BLAKE2b with a 32-byte output.
Digest blake2b256(std::span<const std::uint8_t> data);
std::array<std::uint8_t, 64> sha512(std::span<const std::uint8_t> data);

/// Incremental SHA-256.
class Sha256 {
 public:
  Sha256();
  Sha256& update(std::span<const std::uint8_t> data);
  Sha256& update(std::string_view data);
  Digest finish();

 private:
  crypto_hash_sha256_state state_{};
};

}  // namespace polc
