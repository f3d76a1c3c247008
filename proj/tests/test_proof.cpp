#include <gtest/gtest.h>

#include <random>

#include "polc/errors.hpp"
#include "polc/proof.hpp"
#include "polc/scenario.hpp"

namespace {

using namespace polc;

struct Honest {
  scenario::ScenarioConfig config;
  scenario::World world;
  ProveRequest request;
  ProofBundle bundle;
  VerifierContext ctx;

  explicit Honest(scenario::ScenarioConfig cfg) : config(std::move(cfg)), world(scenario::build_world(config)) {
    request.claim = world.claim;
    request.commitment = &world.commitment;
    request.transcript = world.transcript;
    request.registry = &world.registry;
    request.group_id = config.group_id;
    request.field = config.field;
    request.clock = world.clock;
    bundle = prove_claim(request);
    ctx.registry = &world.registry;
    ctx.ledger = &world.ledger;
  }
  VerifyResult verify(const ProofBundle& b) const { return verify_bundle(b, ctx); }
};

scenario::ScenarioConfig small_field() {
  auto c = scenario::preset_config("retail");
  c.group_id = "test7";
  c.field = ff::FieldProfile::m61;
  return c;
}

TEST(Proof, HonestBundleVerifies) {
  Honest h(scenario::preset_config("retail"));
  EXPECT_TRUE(h.verify(h.bundle).accepted) << h.verify(h.bundle).reason;
  EXPECT_EQ(h.bundle.backend_id, "mock-r1cs");
  for (const auto& s : h.bundle.evidence.samples) EXPECT_FALSE(s.prover_position);
  // deterministic
  EXPECT_EQ(prove_claim(h.request).blob, h.bundle.blob);
}

TEST(Proof, BundleJsonRoundTrip) {
  Honest h(scenario::preset_config("supply-chain"));
  const auto j = to_json(h.bundle);
  const ProofBundle back = bundle_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(to_json(back).dump(), j.dump());
  EXPECT_TRUE(h.verify(back).accepted);
  auto broken = nlohmann::json::parse(j.dump());
  broken["evidence"].erase("clock");
  EXPECT_THROW(bundle_from_json(broken), FormatError);
}

TEST(Proof, InCircuitSchnorrProfile) {
  Honest h(small_field());
  EXPECT_TRUE(h.verify(h.bundle).accepted) << h.verify(h.bundle).reason;
  // a transferred bundle presented under another key fails in-circuit C7
  ProofBundle moved = h.bundle;
  moved.evidence.prover_pk =
      group_by_id("test7").base_mul(TestGroup7::scalar(TestGroup7::value(h.world.prover.sk) == 1 ? 2 : 1));
  const auto r = h.verify(moved);
  EXPECT_FALSE(r.accepted);
  EXPECT_TRUE(r.reason == "C7" || r.reason == "C1" || r.reason == "schnorr-binding") << r.reason;
}

TEST(Proof, PublicInputTampering) {
  Honest h(scenario::preset_config("retail"));
  ProofBundle b = h.bundle;
  b.pub.s1 += 1;
  EXPECT_EQ(h.verify(b).reason, "statement-hash");
  b.pub.statement_hash = statement_hash(b.pub.root, b.pub.s1, b.pub.s2);
  EXPECT_EQ(h.verify(b).reason, "slot-mismatch");

  b = h.bundle;
  b.pub.root[0] ^= 1;
  b.pub.statement_hash = statement_hash(b.pub.root, b.pub.s1, b.pub.s2);
  EXPECT_EQ(h.verify(b).reason, "root-not-anchored");
  VerifierContext no_ledger = h.ctx;
  no_ledger.ledger = nullptr;
  EXPECT_EQ(verify_bundle(b, no_ledger).reason, "public-input-mismatch");
  no_ledger.expected_root = h.world.commitment.root;
  EXPECT_EQ(verify_bundle(b, no_ledger).reason, "root-mismatch");
}

TEST(Proof, EvidenceTampering) {
  Honest h(scenario::preset_config("retail"));
  auto expect_reason = [&](const ProofBundle& b, const std::string& reason) {
    const auto r = h.verify(b);
    EXPECT_FALSE(r.accepted);
    EXPECT_EQ(r.reason, reason);
  };
  ProofBundle b = h.bundle;
  b.evidence.samples[0].db += 1;
  expect_reason(b, "C1");
  b = h.bundle;
  b.evidence.samples[0].sig.z[3] ^= 1;
  expect_reason(b, "C1-native");
  b = h.bundle;
  b.evidence.binding.z[0] ^= 1;
  expect_reason(b, "schnorr-binding");
  b = h.bundle;
  b.evidence.claim.min_samples = 1000;
  expect_reason(b, "C6");
  b = h.bundle;
  b.evidence.samples.pop_back();
  expect_reason(b, "blob-format");
  b = h.bundle;
  std::swap(b.evidence.samples.front(), b.evidence.samples.back());
  expect_reason(b, "sample-order");
  b = h.bundle;
  b.evidence.samples[0].witness_id = "ghost";
  expect_reason(b, "unknown-witness");
  b = h.bundle;
  b.evidence.field = ff::FieldProfile::m61;
  expect_reason(b, "hash-mismatch");
  b = h.bundle;
  b.backend_id = "groth16";
  expect_reason(b, "unknown-backend");

  VerifierContext strict = h.ctx;
  strict.group_id = "test7";
  EXPECT_EQ(verify_bundle(h.bundle, strict).reason, "group-mismatch");
  strict = h.ctx;
  strict.expected_prover_pk = keygen(default_group(), 12345).pk;
  EXPECT_EQ(verify_bundle(h.bundle, strict).reason, "schnorr-binding");
  strict = h.ctx;
  strict.clock = SlotClock{0, 1};
  EXPECT_EQ(verify_bundle(h.bundle, strict).reason, "clock-mismatch");
  strict = h.ctx;
  auto other = h.world.claim;
  other.min_samples += 1;
  strict.expected_claim = other;
  EXPECT_EQ(verify_bundle(h.bundle, strict).reason, "claim-mismatch");
  strict = h.ctx;
  strict.registry = nullptr;
  EXPECT_EQ(verify_bundle(h.bundle, strict).reason, "registry-missing");
}

// Any single-byte change anywhere in the blob is rejected.
TEST(Proof, BlobMutationSweep) {
  Honest h(scenario::preset_config("retail"));
  std::mt19937_64 rng(77);
  const std::size_t n = h.bundle.blob.size();
  std::vector<std::size_t> positions{0, 1, n / 2, n - 33, n - 32, n - 1};
  for (int i = 0; i < 200; ++i) positions.push_back(rng() % n);
  for (std::size_t pos : positions) {
    ProofBundle b = h.bundle;
    b.blob[pos] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    const auto r = h.verify(b);
    ASSERT_FALSE(r.accepted) << pos;
    ASSERT_EQ(r.reason, "blob-integrity") << pos;
  }
  ProofBundle b = h.bundle;
  b.blob.resize(n - 1);
  EXPECT_EQ(h.verify(b).reason, "blob-integrity");
  b.blob.clear();
  EXPECT_EQ(h.verify(b).reason, "blob-integrity");
}

// A blob re-sealed with a valid checksum but a changed witness value must
// fail the constraint check.
TEST(Proof, ResealedAssignmentMutations) {
  Honest h(scenario::preset_config("retail"));
  const std::size_t header = 4 + 11 + 4 + 5 + 8;  // magic, field name, num_vars
  const std::size_t values = (h.bundle.blob.size() - header - 64 - 32) / 32;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    ProofBundle b = h.bundle;
    const std::size_t var = 4 + rng() % (values - 4);  // private variables
    b.blob[header + 32 * var + 31] ^= 1;
    b.blob.resize(b.blob.size() - 32);
    const Digest d = blake2b256(b.blob);
    b.blob.insert(b.blob.end(), d.begin(), d.end());
    const auto r = h.verify(b);
    ASSERT_FALSE(r.accepted) << var;
    ASSERT_TRUE(r.reason.size() == 2 && r.reason[0] == 'C') << r.reason;
  }
}

TEST(Proof, HonestProverRefusals) {
  Honest h(scenario::preset_config("retail"));
  ProveRequest req = h.request;
  req.transcript.samples.clear();
  EXPECT_THROW(prove_claim(req), EmptyTranscriptError);
  req.claim.min_samples = 0;
  const ProofBundle vacuous = prove_claim(req);
  EXPECT_TRUE(h.verify(vacuous).accepted) << h.verify(vacuous).reason;
  req = h.request;
  req.transcript.samples[0].sig.R[0] ^= 1;
  EXPECT_THROW(prove_claim(req), SignatureError);
  req = h.request;
  req.transcript.prover_sk.reset();
  EXPECT_THROW(prove_claim(req), ValidationError);
  req = h.request;
  req.claim.min_samples = 10000;
  EXPECT_THROW(prove_claim(req), UnsatisfiedError);
  req = h.request;
  req.registry = nullptr;
  EXPECT_THROW(prove_claim(req), ValidationError);
  // the unchecked builder still produces a bundle, which the verifier rejects
  req = h.request;
  req.claim.min_samples = 10000;
  EXPECT_EQ(h.verify(prove_unchecked(req)).reason, "C6");
}

}  // namespace
