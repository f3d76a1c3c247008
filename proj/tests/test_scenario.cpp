#include <gtest/gtest.h>

#include <algorithm>

#include "polc/errors.hpp"
#include "polc/scenario.hpp"

namespace {

using namespace polc;
using namespace polc::scenario;

bool label_expected(Adversary a, const std::string& label) {
  const auto labels = expected_labels(a);
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

TEST(Scenario, PresetDefaults) {
  const auto retail = preset_config("retail");
  EXPECT_EQ(retail.witness_count, 1u);
  EXPECT_EQ(retail.interaction, Interaction::non_interactive);
  const auto sc = preset_config("supply-chain");
  EXPECT_EQ(sc.witness_count, 2u);
  const auto ev = preset_config("evoting");
  EXPECT_EQ(ev.preset, "e-voting");
  EXPECT_EQ(ev.interaction, Interaction::interactive);
  EXPECT_EQ(ev.witness_count, 3u);
  EXPECT_LT(ev.precision_m, 10);
  EXPECT_THROW(preset_config("mall"), ValidationError);
}

TEST(Scenario, ConfigJsonRoundTrip) {
  for (const char* p : {"retail", "supply-chain", "e-voting", "roadx"}) {
    for (Adversary a : kAllAdversaries) {
      auto c = preset_config(p, a, 17);
      c.noise_m = 1.5;
      const auto j = to_json(c);
      EXPECT_EQ(to_json(config_from_json(nlohmann::json::parse(j.dump()))).dump(), j.dump());
    }
  }
  const auto partial = config_from_json(nlohmann::json{{"preset", "e-voting"}, {"rng_seed", 4}});
  EXPECT_EQ(partial.witness_count, 3u);
  EXPECT_EQ(partial.rng_seed, 4u);
  EXPECT_THROW(config_from_json(nlohmann::json{{"preset", "retail"}, {"adversary", "bribe"}}), ValidationError);
}

TEST(Scenario, NamesRoundTrip) {
  for (Adversary a : kAllAdversaries) EXPECT_EQ(adversary_from_string(to_string(a)), a);
  EXPECT_EQ(adversary_from_string("none"), Adversary::none);
  for (auto t : {TrustModel::centralized_anchor, TrustModel::partially_distributed, TrustModel::decentralized_quorum})
    EXPECT_EQ(trust_model_from_string(to_string(t)), t);
  for (auto i : {Interaction::interactive, Interaction::non_interactive})
    EXPECT_EQ(interaction_from_string(to_string(i)), i);
}

TEST(Scenario, Validation) {
  auto c = preset_config("retail");
  c.witness_count = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = preset_config("retail");
  c.precision_m = -1;
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Scenario, HonestRunsAcceptAndAgreeWithGroundTruth) {
  for (const char* p : {"retail", "supply-chain", "e-voting"}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto r = run_scenario(preset_config(p, Adversary::none, seed));
      EXPECT_TRUE(r.ground_truth) << r.scenario;
      EXPECT_TRUE(r.verdict) << r.scenario << " " << r.failure_label;
      EXPECT_GT(r.samples, 0u);
    }
  }
}

TEST(Scenario, AdversariesRejectWithExpectedLabels) {
  for (Adversary a : kAllAdversaries) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const char* preset = a == Adversary::relay_delay ? "e-voting" : "supply-chain";
      const auto r = run_scenario(preset_config(preset, a, seed));
      EXPECT_FALSE(r.verdict) << r.scenario;
      EXPECT_TRUE(label_expected(a, r.failure_label)) << r.scenario << " " << r.failure_label;
    }
  }
}

TEST(Scenario, DeterministicAcrossRunsAndWorkers) {
  std::vector<ScenarioConfig> configs{preset_config("retail"), preset_config("e-voting", Adversary::teleport, 3),
                                      preset_config("supply-chain", Adversary::forge_signature, 9)};
  const auto one = run_batch(configs, 3, 1);
  const auto two = run_batch(configs, 3, 2);
  EXPECT_EQ(one.jsonl(), two.jsonl());
  EXPECT_EQ(one.report.to_json().dump(), two.report.to_json().dump());
  EXPECT_EQ(one.jsonl(), run_batch(configs, 3, 1).jsonl());
  ASSERT_EQ(one.results.size(), 9u);
  EXPECT_EQ(one.results[3].scenario, "e-voting/teleport/seed=3");
  EXPECT_EQ(one.results[5].scenario, "e-voting/teleport/seed=5");
}

TEST(Scenario, SeedsProduceDifferentWorlds) {
  const auto a = build_world(preset_config("retail", Adversary::none, 1));
  const auto b = build_world(preset_config("retail", Adversary::none, 2));
  EXPECT_NE(a.commitment.root, b.commitment.root);
  const auto a2 = build_world(preset_config("retail", Adversary::none, 1));
  EXPECT_EQ(a.commitment.root, a2.commitment.root);
  EXPECT_EQ(a.transcript.samples, a2.transcript.samples);
}

TEST(Scenario, ArtifactsMatchResult) {
  ScenarioArtifacts art;
  const auto r = run_scenario(preset_config("retail", Adversary::none, 2), &art);
  ASSERT_TRUE(art.has_bundle);
  VerifierContext ctx;
  ctx.registry = &art.world.registry;
  ctx.ledger = &art.world.ledger;
  ctx.expected_claim = art.presented_claim;
  ctx.expected_prover_pk = art.presenter;
  EXPECT_EQ(verify_bundle(art.bundle, ctx).accepted, r.verdict);
}

TEST(Scenario, RoadX) {
  const auto r = run_scenario(preset_config("roadx"));
  EXPECT_TRUE(r.ground_truth);
  EXPECT_TRUE(r.verdict) << r.failure_label;
  EXPECT_EQ(r.samples, 40u);
}

TEST(Scenario, InCircuitSignatureProfile) {
  auto c = preset_config("retail");
  c.group_id = "test7";
  c.field = ff::FieldProfile::m61;
  EXPECT_TRUE(run_scenario(c).verdict);
  c.adversary = Adversary::transfer_proof;
  const auto r = run_scenario(c);
  EXPECT_FALSE(r.verdict);
  EXPECT_TRUE(label_expected(Adversary::transfer_proof, r.failure_label)) << r.failure_label;
}

}  // namespace
