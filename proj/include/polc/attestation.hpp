#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "polc/bytes.hpp"
#include "polc/grid.hpp"
#include "polc/schnorr.hpp"
#include "polc/slots.hpp"

namespace polc {

struct WitnessIdentity {
  std::string witness_id;
  Keypair keys;
  grid::Point position;  // metres, local frame
  grid::CellId cell;     // locate(position)
  double max_range_m = 0;  // refuses to attest beyond this bound; 0 = unlimited
};

/// What a verifier knows about a witness.
struct WitnessRecord {
  std::string witness_id;
  Element pk{};
  grid::Point position;
  grid::CellId cell;
};

/// Static witness PKI.
class WitnessRegistry {
 public:
  void add(WitnessRecord record);
  void add(const WitnessIdentity& w) { add({w.witness_id, w.keys.pk, w.position, w.cell}); }
  const WitnessRecord* find(const std::string& witness_id) const;
  const std::map<std::string, WitnessRecord>& records() const { return records_; }

 private:
  std::map<std::string, WitnessRecord> records_;
};

/// Distance-bounding channel. Measured bound = true distance + delay, where
/// the delay is uniform in [0, epsilon_m) plus a fixed relay delay. Delay is
/// never negative.
struct ChannelModel {
  double epsilon_m = 0;
  double relay_delay_m = 0;
};

/// Deterministic bound for channels without random noise (epsilon = 0).
double distance_bound(grid::Point prover, const WitnessIdentity& witness, const ChannelModel& channel);
double distance_bound(grid::Point prover, const WitnessIdentity& witness, const ChannelModel& channel,
                      std::mt19937_64& rng);

struct AttestationSample {
  std::string witness_id;
  Signature sig;
  std::uint64_t db = 0;  // whole metres, rounded up
  grid::CellId cell;
  std::uint64_t slot = 0;
  /// Prover's own integer coordinates; private circuit input for proximity.
  std::optional<grid::Point> prover_position;

  bool operator==(const AttestationSample&) const = default;
};

/// Canonical bytes signed by the witness:
/// tag || witness_id || db || q || r || resolution || slot || prover_pk.
Bytes sample_message(const std::string& witness_id, std::uint64_t db, const grid::CellId& cell,
                     std::uint64_t slot, const Element& prover_pk);
Bytes sample_message(const AttestationSample& s, const Element& prover_pk);

/// Signs a sample for `prover_pk` at `wall_time`; db = ceil(distance_bound).
/// Throws PreGenesisError (from the clock) and ValidationError when the
/// witness is out of range.
AttestationSample attest(const SchnorrGroup& group, const WitnessIdentity& witness,
                         const Element& prover_pk, grid::Point prover_position, const SlotClock& clock,
                         std::int64_t wall_time, const ChannelModel& channel, std::mt19937_64& rng);
AttestationSample attest(const SchnorrGroup& group, const WitnessIdentity& witness,
                         const Element& prover_pk, grid::Point prover_position, const SlotClock& clock,
                         std::int64_t wall_time, const ChannelModel& channel = {});

bool verify_sample(const SchnorrGroup& group, const WitnessRecord& witness, const Element& prover_pk,
                   const AttestationSample& sample);

/// Sample list kept sorted by (slot, witness_id).
struct Transcript {
  Element prover_pk{};
  std::optional<Scalar> prover_sk;  // prover role only
  std::vector<AttestationSample> samples;

  static Transcript make(Element prover_pk, std::vector<AttestationSample> samples,
                         std::optional<Scalar> prover_sk = std::nullopt);
  void add(AttestationSample s);
  std::size_t size() const { return samples.size(); }
  bool sorted() const;
};

bool sample_order(const AttestationSample& a, const AttestationSample& b);

}  // namespace polc
