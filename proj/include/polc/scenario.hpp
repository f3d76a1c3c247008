#pragma once

// End-to-end scenario generation: trajectory, witnesses, attestation, proof,
// verification, and the ground-truth evaluation of the same claim.
//
// Presets
//   retail        ~150 m precision, 1 witness, non-interactive
//   supply-chain  ~50 m precision, 2 partner witnesses, non-interactive
//   e-voting      <10 m precision, 3 witnesses, interactive (distance bound <= 8 m)
//   roadx         vehicle on a 6 km road strip, 40 samples 30 s apart, 12 s slots
//
// Non-interactive witnesses refuse to attest beyond a trust radius that keeps
// the prover inside the committed region; interactive presets rely on the
// distance-bound budget instead.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polc/attestation.hpp"
#include "polc/dsl.hpp"
#include "polc/field.hpp"
#include "polc/logic.hpp"
#include "polc/merkle.hpp"
#include "polc/proof.hpp"
#include "polc/slots.hpp"

namespace polc::scenario {

enum class TrustModel { centralized_anchor, partially_distributed, decentralized_quorum };
enum class Interaction { interactive, non_interactive };
enum class Adversary {
  none,
  teleport,
  outside_region,
  slot_shift,
  forge_signature,
  replay_proof,
  transfer_proof,
  relay_delay,
};

inline constexpr Adversary kAllAdversaries[] = {
    Adversary::teleport,        Adversary::outside_region, Adversary::slot_shift,     Adversary::forge_signature,
    Adversary::replay_proof,    Adversary::transfer_proof, Adversary::relay_delay,
};

std::string_view to_string(TrustModel t);
std::string_view to_string(Interaction i);
std::string_view to_string(Adversary a);
TrustModel trust_model_from_string(std::string_view s);  // throws ValidationError
Interaction interaction_from_string(std::string_view s);
Adversary adversary_from_string(std::string_view s);

/// Labels a verifier may report when rejecting this adversary.
std::vector<std::string> expected_labels(Adversary a);

struct ScenarioConfig {
  std::string preset = "retail";
  TrustModel trust_model = TrustModel::centralized_anchor;
  Interaction interaction = Interaction::non_interactive;
  double precision_m = 150;
  unsigned witness_count = 1;
  Adversary adversary = Adversary::none;
  std::uint64_t rng_seed = 0;
  std::string group_id = "ristretto255";
  ff::FieldProfile field = ff::FieldProfile::bn254;
  unsigned quorum = 0;        // witnesses attesting each interactive sample; 0 = all
  double noise_m = 0;         // honest channel noise, one-sided
  double relay_delay_m = 20;  // extra bound added by a relay adversary

  void validate() const;  // throws ValidationError
};

/// Preset defaults; accepts "retail", "supply-chain", "e-voting" (or "evoting"), "roadx".
ScenarioConfig preset_config(std::string_view preset, Adversary adversary = Adversary::none,
                             std::uint64_t seed = 0);

nlohmann::ordered_json to_json(const ScenarioConfig& c);
/// Missing fields take the preset's defaults.
ScenarioConfig config_from_json(const nlohmann::json& j);

/// Everything generated for one scenario before proving.
struct World {
  grid::HexGrid grid{grid::kDefaultResolution};
  SlotClock clock;
  grid::Ring region;
  RegionCommitment commitment;
  std::vector<WitnessIdentity> witnesses;
  WitnessRegistry registry;
  LedgerSim ledger;
  Keypair prover;
  dsl::Claim claim;
  logic::Trajectory trajectory;
  Transcript transcript;  // honest attestations of `trajectory`, with prover_sk
};

/// Honest world for `config` (the adversary field is ignored).
World build_world(const ScenarioConfig& config);

struct ScenarioResult {
  std::string scenario;
  bool ground_truth = false;
  bool verdict = false;
  std::string failure_label;  // verifier reason, or "error:<Kind>"
  std::size_t samples = 0;

  nlohmann::ordered_json to_json() const;
  bool operator==(const ScenarioResult&) const = default;
};

/// Inputs and outputs of one run, for exporting as CLI files.
struct ScenarioArtifacts {
  World world;
  ProofBundle bundle;
  dsl::Claim presented_claim;  // the claim the bundle is checked against
  Element presenter{};         // key of the party presenting the bundle
  bool has_bundle = false;
};

ScenarioResult run_scenario(const ScenarioConfig& config, ScenarioArtifacts* artifacts = nullptr);

struct BatchResult {
  std::vector<ScenarioResult> results;
  logic::Report report;
  std::string jsonl() const;
};

/// Runs `trials` seeds per config, starting at each config's rng_seed.
/// Results keep config-then-seed order for any worker count.
BatchResult run_batch(const std::vector<ScenarioConfig>& configs, std::size_t trials, unsigned workers = 1);

}  // namespace polc::scenario
