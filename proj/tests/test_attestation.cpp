#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "polc/attestation.hpp"
#include "polc/errors.hpp"
#include "polc/io.hpp"

namespace {

using namespace polc;

WitnessIdentity make_witness(const std::string& id, grid::Point pos, std::uint64_t seed, double range = 0) {
  WitnessIdentity w;
  w.witness_id = id;
  w.keys = keygen(default_group(), seed);
  w.position = pos;
  w.cell = grid::HexGrid(9).locate(pos);
  w.max_range_m = range;
  return w;
}

TEST(Attestation, SampleVerifiesAndBindsEveryField) {
  const auto& g = default_group();
  const SlotClock clock{1000, 12};
  const auto w = make_witness("w0", {10, 20}, 1);
  const auto prover = keygen(g, 99);
  const AttestationSample s = attest(g, w, prover.pk, {13, 24}, clock, 1030);
  EXPECT_EQ(s.slot, 2U);
  EXPECT_EQ(s.db, 5U);
  EXPECT_EQ(s.cell, w.cell);
  const WitnessRecord rec{w.witness_id, w.keys.pk, w.position, w.cell};
  EXPECT_TRUE(verify_sample(g, rec, prover.pk, s));

  auto t = s;
  t.db = 4;
  EXPECT_FALSE(verify_sample(g, rec, prover.pk, t));
  t = s;
  t.slot = 3;
  EXPECT_FALSE(verify_sample(g, rec, prover.pk, t));
  t = s;
  t.cell.q += 1;
  EXPECT_FALSE(verify_sample(g, rec, prover.pk, t));
  t = s;
  t.witness_id = "w1";
  EXPECT_FALSE(verify_sample(g, rec, prover.pk, t));
  EXPECT_FALSE(verify_sample(g, rec, keygen(g, 98).pk, s));  // bound to the prover key
  // prover position is not signed
  t = s;
  t.prover_position = grid::Point{0, 0};
  EXPECT_TRUE(verify_sample(g, rec, prover.pk, t));
}

TEST(Attestation, DistanceBoundNeverUnderestimates) {
  std::mt19937_64 rng(8);
  const auto w = make_witness("w", {0, 0}, 2);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int i = 0; i < 2000; ++i) {
    const grid::Point p{u(rng), u(rng)};
    const double truth = std::hypot(p.x, p.y);
    const ChannelModel ch{static_cast<double>(i % 5), static_cast<double>(i % 3) * 10};
    const double b = distance_bound(p, w, ch, rng);
    EXPECT_GE(b, truth + ch.relay_delay_m);
    EXPECT_LT(b, truth + ch.relay_delay_m + std::max(ch.epsilon_m, 1e-9));
  }
}

TEST(Attestation, RangeRefusalAndPreGenesis) {
  const auto& g = default_group();
  const auto w = make_witness("w", {0, 0}, 3, 50);
  const auto prover = keygen(g, 1);
  EXPECT_NO_THROW(attest(g, w, prover.pk, {30, 30}, SlotClock{0, 12}, 100));
  EXPECT_THROW(attest(g, w, prover.pk, {40, 40}, SlotClock{0, 12}, 100), ValidationError);
  EXPECT_THROW(attest(g, w, prover.pk, {0, 0}, SlotClock{200, 12}, 100), PreGenesisError);
  // relay delay pushes a close prover past the range
  EXPECT_THROW(attest(g, w, prover.pk, {30, 30}, SlotClock{0, 12}, 100, ChannelModel{0, 20}), ValidationError);
}

TEST(Attestation, TranscriptOrdering) {
  const auto& g = default_group();
  const auto prover = keygen(g, 1);
  std::vector<AttestationSample> samples;
  for (int i = 5; i >= 0; --i)
    for (const char* id : {"b", "a"})
      samples.push_back(attest(g, make_witness(id, {0, 0}, 4), prover.pk, {1, 1}, SlotClock{0, 12}, i * 12));
  Transcript t = Transcript::make(prover.pk, samples);
  EXPECT_TRUE(t.sorted());
  EXPECT_EQ(t.samples.front().witness_id, "a");
  EXPECT_EQ(t.samples.front().slot, 0U);
  t.add(attest(g, make_witness("c", {0, 0}, 5), prover.pk, {1, 1}, SlotClock{0, 12}, 30));
  EXPECT_TRUE(t.sorted());
  EXPECT_EQ(t.size(), 13U);
}

TEST(Attestation, RegistryAndTranscriptJson) {
  const auto& g = default_group();
  WitnessRegistry reg;
  const auto w = make_witness("w0", {10, 20}, 1);
  reg.add(w);
  ASSERT_NE(reg.find("w0"), nullptr);
  EXPECT_EQ(reg.find("nope"), nullptr);
  const auto back = io::registry_from_json(nlohmann::json::parse(io::to_json(reg, "ristretto255").dump()));
  ASSERT_NE(back.find("w0"), nullptr);
  EXPECT_EQ(back.find("w0")->pk, w.keys.pk);
  EXPECT_EQ(back.find("w0")->cell, w.cell);

  const auto prover = keygen(g, 9);
  Transcript t = Transcript::make(prover.pk, {attest(g, w, prover.pk, {3, 4}, SlotClock{0, 12}, 50)}, prover.sk);
  const auto tj = io::to_json(t, "ristretto255");
  const auto t2 = io::transcript_from_json(nlohmann::json::parse(tj.dump()));
  EXPECT_EQ(t2.samples, t.samples);
  EXPECT_EQ(t2.prover_pk, t.prover_pk);
  const auto pub = io::transcript_from_json(nlohmann::json::parse(io::to_json(t, "ristretto255", false).dump()));
  EXPECT_FALSE(pub.samples[0].prover_position);
  const auto kp = io::key_from_json(nlohmann::json::parse(io::key_json(prover, "ristretto255").dump()));
  EXPECT_EQ(kp.sk, prover.sk);
  EXPECT_EQ(kp.pk, prover.pk);
}

}  // namespace
