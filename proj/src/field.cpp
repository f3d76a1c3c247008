#include "polc/field.hpp"

#include "polc/bytes.hpp"
#include "polc/errors.hpp"

namespace polc::ff {

namespace {
std::string strip_hex(const std::array<std::uint8_t, 32>& be) {
  std::string h = to_hex(be);
  auto nz = h.find_first_not_of('0');
  return "0x" + (nz == std::string::npos ? std::string("0") : h.substr(nz));
}
}  // namespace

std::string Fp61::to_hex() const { return strip_hex(to_bytes_be()); }
std::string Fp61::modulus_hex() { return "0x1fffffffffffffff"; }

std::string Fp254::to_hex() const { return strip_hex(to_bytes_be()); }
std::string Fp254::modulus_hex() {
  return "0x30644e72e131a029b85045b68181585d2833e84879b9709143e1f593f0000001";
}

std::string_view to_string(FieldProfile p) {
  return p == FieldProfile::m61 ? Fp61::kName : Fp254::kName;
}

FieldProfile field_profile_from_string(std::string_view name) {
  if (name == Fp61::kName) return FieldProfile::m61;
  if (name == Fp254::kName) return FieldProfile::bn254;
  throw FormatError("unknown field profile '" + std::string(name) + "'");
}

}  // namespace polc::ff
