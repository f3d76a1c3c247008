#include "polc/bytes.hpp"

#include <sodium.h>

#include <bit>
#include <cstring>

#include "polc/errors.hpp"
#include "polc/hash.hpp"

namespace polc {

std::string to_hex(std::span<const std::uint8_t> data) {
  std::string out(data.size() * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), data.data(), data.size());
  out.pop_back();
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.size() % 2 != 0) throw FormatError("odd-length hex string");
  Bytes out(hex.size() / 2);
  std::size_t written = 0;
  const char* end = nullptr;
  if (sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr, &written,
                     &end) != 0 ||
      written != out.size()) {
    throw FormatError("invalid hex string");
  }
  return out;
}

Digest digest_from_hex(std::string_view hex) {
  Bytes b = from_hex(hex);
  if (b.size() != 32) throw FormatError("digest must be 32 bytes");
  Digest d;
  std::memcpy(d.data(), b.data(), 32);
  return d;
}

std::string to_base64(std::span<const std::uint8_t> data) {
  const auto variant = sodium_base64_VARIANT_ORIGINAL;
  std::string out(sodium_base64_ENCODED_LEN(data.size(), variant), '\0');
  sodium_bin2base64(out.data(), out.size(), data.data(), data.size(), variant);
  out.pop_back();
  return out;
}

Bytes from_base64(std::string_view text) {
  Bytes out(text.size() / 4 * 3 + 3);
  std::size_t len = 0;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &len,
                        nullptr, sodium_base64_VARIANT_ORIGINAL) != 0) {
    throw FormatError("invalid base64 payload");
  }
  out.resize(len);
  return out;
}

void ByteWriter::u32(std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
}

void ByteWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::str(std::string_view s) {
  u32(static_cast<std::uint32_t>(s.size()));
  out_.insert(out_.end(), s.begin(), s.end());
}

void ByteWriter::blob(std::span<const std::uint8_t> data) {
  u32(static_cast<std::uint32_t>(data.size()));
  raw(data);
}

std::span<const std::uint8_t> ByteReader::raw(std::size_t n) {
  if (remaining() < n) throw FormatError("truncated byte stream");
  auto s = data_.subspan(pos_, n);
  pos_ += n;
  return s;
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint32_t ByteReader::u32() {
  auto s = raw(4);
  std::uint32_t v = 0;
  for (auto b : s) v = (v << 8) | b;
  return v;
}

std::uint64_t ByteReader::u64() {
  auto s = raw(8);
  std::uint64_t v = 0;
  for (auto b : s) v = (v << 8) | b;
  return v;
}

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

std::string ByteReader::str() {
  auto n = u32();
  auto s = raw(n);
  return std::string(s.begin(), s.end());
}

Bytes ByteReader::blob() {
  auto n = u32();
  auto s = raw(n);
  return Bytes(s.begin(), s.end());
}

// hash.hpp

void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw std::runtime_error("libsodium initialisation failed");
}

Digest sha256(std::span<const std::uint8_t> data) {
  ensure_sodium();
  Digest d;
  crypto_hash_sha256(d.data(), data.data(), data.size());
  return d;
}

Digest sha256(std::string_view data) {
  return sha256(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

Digest blake2b256(std::span<const std::uint8_t> data) {
  ensure_sodium();
  Digest d;
  crypto_generichash(d.data(), d.size(), data.data(), data.size(), nullptr, 0);
  return d;
}

std::array<std::uint8_t, 64> sha512(std::span<const std::uint8_t> data) {
  ensure_sodium();
  std::array<std::uint8_t, 64> d;
  crypto_hash_sha512(d.data(), data.data(), data.size());
  return d;
}

Sha256::Sha256() {
  ensure_sodium();
  crypto_hash_sha256_init(&state_);
}

Sha256& Sha256::update(std::span<const std::uint8_t> data) {
  crypto_hash_sha256_update(&state_, data.data(), data.size());
  return *this;
}

Sha256& Sha256::update(std::string_view data) {
  return update(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

Digest Sha256::finish() {
  Digest d;
  crypto_hash_sha256_final(&state_, d.data());
  return d;
}

}  // namespace polc
