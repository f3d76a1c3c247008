#include "polc/attestation.hpp"

#include <algorithm>
#include <cmath>

#include "polc/errors.hpp"

namespace polc {

namespace {
constexpr std::string_view kSampleTag = "polc/sample/v1";
}

void WitnessRegistry::add(WitnessRecord record) {
  const std::string id = record.witness_id;
  records_.insert_or_assign(id, std::move(record));
}

const WitnessRecord* WitnessRegistry::find(const std::string& witness_id) const {
  auto it = records_.find(witness_id);
  return it == records_.end() ? nullptr : &it->second;
}

double distance_bound(grid::Point prover, const WitnessIdentity& witness, const ChannelModel& channel) {
  return std::hypot(prover.x - witness.position.x, prover.y - witness.position.y) +
         std::max(0.0, channel.relay_delay_m);
}

double distance_bound(grid::Point prover, const WitnessIdentity& witness, const ChannelModel& channel,
                      std::mt19937_64& rng) {
  double noise = 0;
  if (channel.epsilon_m > 0) noise = std::uniform_real_distribution<double>(0.0, channel.epsilon_m)(rng);
  return distance_bound(prover, witness, channel) + noise;
}

Bytes sample_message(const std::string& witness_id, std::uint64_t db, const grid::CellId& cell,
                     std::uint64_t slot, const Element& prover_pk) {
  ByteWriter w;
  w.str(kSampleTag);
  w.str(witness_id);
  w.u64(db);
  w.i64(cell.q);
  w.i64(cell.r);
  w.u8(static_cast<std::uint8_t>(cell.resolution));
  w.u64(slot);
  w.raw(prover_pk);
  return std::move(w).bytes();
}

Bytes sample_message(const AttestationSample& s, const Element& prover_pk) {
  return sample_message(s.witness_id, s.db, s.cell, s.slot, prover_pk);
}

AttestationSample attest(const SchnorrGroup& group, const WitnessIdentity& witness,
                         const Element& prover_pk, grid::Point prover_position, const SlotClock& clock,
                         std::int64_t wall_time, const ChannelModel& channel, std::mt19937_64& rng) {
  AttestationSample s;
  s.slot = clock.slot_of(wall_time);
  const double bound = distance_bound(prover_position, witness, channel, rng);
  if (witness.max_range_m > 0 && bound > witness.max_range_m)
    throw ValidationError("witness " + witness.witness_id + " refuses: distance bound " +
                          std::to_string(bound) + " m exceeds its range");
  s.witness_id = witness.witness_id;
  s.db = static_cast<std::uint64_t>(std::ceil(bound));
  s.cell = witness.cell;
  s.prover_position = prover_position;
  s.sig = sign(group, witness.keys, sample_message(s, prover_pk));
  return s;
}

AttestationSample attest(const SchnorrGroup& group, const WitnessIdentity& witness,
                         const Element& prover_pk, grid::Point prover_position, const SlotClock& clock,
                         std::int64_t wall_time, const ChannelModel& channel) {
  std::mt19937_64 rng(0);
  return attest(group, witness, prover_pk, prover_position, clock, wall_time, channel, rng);
}

bool verify_sample(const SchnorrGroup& group, const WitnessRecord& witness, const Element& prover_pk,
                   const AttestationSample& sample) {
  if (sample.witness_id != witness.witness_id) return false;
  return verify(group, witness.pk, sample_message(sample, prover_pk), sample.sig);
}

bool sample_order(const AttestationSample& a, const AttestationSample& b) {
  if (a.slot != b.slot) return a.slot < b.slot;
  return a.witness_id < b.witness_id;
}

Transcript Transcript::make(Element prover_pk, std::vector<AttestationSample> samples,
                            std::optional<Scalar> prover_sk) {
  Transcript t;
  t.prover_pk = prover_pk;
  t.prover_sk = prover_sk;
  t.samples = std::move(samples);
  std::stable_sort(t.samples.begin(), t.samples.end(), sample_order);
  return t;
}

void Transcript::add(AttestationSample s) {
  auto it = std::upper_bound(samples.begin(), samples.end(), s, sample_order);
  samples.insert(it, std::move(s));
}

bool Transcript::sorted() const { return std::is_sorted(samples.begin(), samples.end(), sample_order); }

}  // namespace polc
