#include <gtest/gtest.h>

#include <string>

#include "polc/errors.hpp"
#include "polc/schnorr.hpp"

namespace {

using polc::Element;
using polc::Scalar;
using polc::Signature;
using polc::TestGroup7;

constexpr std::uint64_t kP = (std::uint64_t{1} << 61) - 1;

std::uint64_t powmod(std::uint64_t b, std::uint64_t e) {
  unsigned __int128 acc = 1, base = b % kP;
  while (e) {
    if (e & 1) acc = acc * base % kP;
    base = base * base % kP;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(acc);
}

Element encode(std::uint64_t v) {
  Element e{};
  for (int i = 0; i < 8; ++i) e[31 - i] = static_cast<std::uint8_t>(v >> (8 * i));
  return e;
}

polc::Bytes msg_of(int i) {
  const std::string s = "message-" + std::to_string(i);
  return {s.begin(), s.end()};
}

TEST(Schnorr, TestGroupStructure) {
  const TestGroup7 g;
  EXPECT_EQ(powmod(TestGroup7::kGenerator, 7), 1U);
  EXPECT_NE(TestGroup7::kGenerator, 1U);
  EXPECT_EQ(TestGroup7::kGenerator, powmod(3, (kP - 1) / 7));
  for (std::uint64_t s = 0; s < 7; ++s) {
    EXPECT_EQ(TestGroup7::element_value(g.base_mul(TestGroup7::scalar(s))), powmod(TestGroup7::kGenerator, s));
    EXPECT_TRUE(g.is_valid(g.base_mul(TestGroup7::scalar(s))));
  }
  EXPECT_FALSE(g.is_valid(encode(2)));
  EXPECT_FALSE(g.is_valid(encode(0)));
  polc::Scalar seven{};
  seven[0] = 7;
  EXPECT_FALSE(g.is_canonical(seven));
  EXPECT_TRUE(g.is_canonical(TestGroup7::scalar(7)));
}

// Every (sk, message) pair; every candidate signature (R, z) over the group
// is checked against the verification equation computed independently.
TEST(Schnorr, ExhaustiveOverTestGroup) {
  const TestGroup7 g;
  const std::uint64_t gen = TestGroup7::kGenerator;
  for (std::uint64_t sk = 1; sk < 7; ++sk) {
    const polc::Keypair kp{TestGroup7::scalar(sk), g.base_mul(TestGroup7::scalar(sk))};
    const std::uint64_t pk = powmod(gen, sk);
    ASSERT_EQ(TestGroup7::element_value(kp.pk), pk);
    for (int m = 0; m < 6; ++m) {
      const auto msg = msg_of(m);
      const Signature honest = polc::sign(g, kp, msg);
      EXPECT_TRUE(polc::verify(g, kp.pk, msg, honest));
      int accepted = 0;
      for (std::uint64_t rexp = 0; rexp < 7; ++rexp)
        for (std::uint64_t z = 0; z < 7; ++z) {
          const Signature sig{encode(powmod(gen, rexp)), TestGroup7::scalar(z)};
          const std::uint64_t c = TestGroup7::value(polc::schnorr_challenge(g, sig.R, kp.pk, msg));
          const bool expected = powmod(gen, z) == static_cast<std::uint64_t>(
                                                      static_cast<unsigned __int128>(powmod(gen, rexp)) *
                                                      powmod(pk, c) % kP);
          ASSERT_EQ(polc::verify(g, kp.pk, msg, sig), expected) << sk << " " << m << " " << rexp << " " << z;
          accepted += expected;
        }
      EXPECT_EQ(accepted, 7);  // one valid z per R
    }
  }
}

TEST(Schnorr, TestGroupRejectsIdentityKeyAndNonCanonicalResponse) {
  const TestGroup7 g;
  const auto msg = msg_of(1);
  const polc::Keypair kp = polc::keygen(g, 5);
  Signature sig = polc::sign(g, kp, msg);
  EXPECT_FALSE(polc::verify(g, g.identity(), msg, sig));
  Signature wrapped = sig;
  wrapped.z[0] = static_cast<std::uint8_t>(wrapped.z[0] + 7);
  EXPECT_FALSE(polc::verify(g, kp.pk, msg, wrapped));
}

TEST(Schnorr, RistrettoSignVerifyAndTamper) {
  const auto& g = polc::default_group();
  EXPECT_EQ(g.id(), "ristretto255");
  const polc::Keypair kp = polc::keygen(g, 42);
  EXPECT_EQ(polc::keygen(g, 42).pk, kp.pk);
  EXPECT_NE(polc::keygen(g, 43).pk, kp.pk);
  const auto msg = msg_of(7);
  const Signature sig = polc::sign(g, kp, msg);
  EXPECT_EQ(polc::sign(g, kp, msg), sig);  // deterministic nonce
  EXPECT_TRUE(polc::verify(g, kp.pk, msg, sig));
  EXPECT_FALSE(polc::verify(g, kp.pk, msg_of(8), sig));
  EXPECT_FALSE(polc::verify(g, polc::keygen(g, 1).pk, msg, sig));
  for (int byte : {0, 15, 31}) {
    Signature t = sig;
    t.R[byte] ^= 1;
    EXPECT_FALSE(polc::verify(g, kp.pk, msg, t));
    t = sig;
    t.z[byte] ^= 1;
    EXPECT_FALSE(polc::verify(g, kp.pk, msg, t));
  }
  Signature high = sig;
  high.z[31] |= 0xf0;  // non-canonical scalar
  EXPECT_FALSE(polc::verify(g, kp.pk, msg, high));
  EXPECT_FALSE(polc::verify(g, g.identity(), msg, sig));
}

TEST(Schnorr, SignatureBytesRoundTrip) {
  const auto& g = polc::default_group();
  const Signature sig = polc::sign(g, polc::keygen(g, 1), msg_of(0));
  EXPECT_EQ(Signature::from_bytes(sig.to_bytes()), sig);
  EXPECT_THROW(Signature::from_bytes(polc::Bytes(63)), polc::FormatError);
  EXPECT_THROW(polc::group_by_id("secp256k1"), polc::FormatError);
  EXPECT_EQ(polc::group_by_id("test7").id(), "test7");
}

}  // namespace
