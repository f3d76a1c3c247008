#pragma once

// Claim + commitment + transcript -> constraint system and assignment.
//
// Variable layout: four public inputs (root, s1, s2, statement hash), then
// per-sample blocks in transcript order, then the global gadgets. Constraint
// labels name the gadget family:
//
//   C1  in-circuit hash of the signed tuple equals the natively checked value
//   C2  prover within db of the witness, and db within the claim's budget
//   C3  Merkle path from the sample cell to the public root
//   C4  s1 <= slot <= s2
//   C5  previous slot <= slot <= previous slot + gap bound
//   C6  sample count equals m and is at least m_min
//   C7  Schnorr knowledge of the prover key (m61 field with the test7 group)
//
// The verifier runs the same synthesis from public data and evidence; missing
// private inputs default to zero and only change the assignment, never the
// system.

#include <cmath>
#include <optional>
#include <string>

#include "polc/attestation.hpp"
#include "polc/dsl.hpp"
#include "polc/gadgets.hpp"
#include "polc/merkle.hpp"
#include "polc/r1cs.hpp"
#include "polc/slots.hpp"

namespace polc {

struct PublicInputs {
  Digest root{};
  std::uint64_t s1 = 0;
  std::uint64_t s2 = 0;
  Digest statement_hash{};
  bool operator==(const PublicInputs&) const = default;
};

/// H(root || s1 || s2): SHA-256 over the 32-byte root and two 8-byte big-endian slots.
Digest statement_hash(const Digest& root, std::uint64_t s1, std::uint64_t s2);

/// Message the prover signs to bind a proof to its key: tag || H || claim bytes.
Bytes binding_message(const Digest& statement_hash, const dsl::Claim& claim);

struct SynthesisOptions {
  SlotClock clock;
  std::string group_id = "ristretto255";
  /// Witness positions for C2; required when the claim asks for proximity.
  const WitnessRegistry* registry = nullptr;
  /// Prover's signature over binding_message; required for in-circuit C7.
  std::optional<Signature> binding;
  unsigned db_bits = 20;
  unsigned slot_bits = 32;
  /// false builds the system only (verifier side); the assignment is all zeros.
  bool with_witness = true;
};

/// Whether C7 is expressed in the circuit for field F and the given group.
template <ff::PrimeField F>
bool schnorr_in_circuit(const std::string& group_id) {
  if (group_id != "test7") return false;
  if constexpr (!std::is_same_v<F, ff::Fp61>)
    throw GroupProfileError("the test7 group needs the m61 field profile for in-circuit C7");
  return true;
}

template <ff::PrimeField F>
struct Synthesized {
  r1cs::ConstraintSystem<F> cs;
  r1cs::Assignment<F> assignment;
  PublicInputs pub;
};

template <ff::PrimeField F>
std::array<F, 4> public_field_values(const PublicInputs& pub) {
  return {F::from_bytes_be(pub.root), F::from_u64(pub.s1), F::from_u64(pub.s2),
          F::from_bytes_be(pub.statement_hash)};
}

/// `commitment` may carry only root, depth and hash id (verifier side); then
/// membership paths are zero. Samples whose cell is not committed get a
/// placeholder path, which leaves C3 unsatisfied.
template <ff::PrimeField F>
Synthesized<F> synthesize(const dsl::Claim& claim, const RegionCommitment& commitment,
                          const Transcript& transcript, const SynthesisOptions& options) {
  using LC = r1cs::LinearCombination<F>;
  using r1cs::Var;
  namespace g = gadgets;

  const std::string expected_hash = "poseidon-" + std::string(F::kName);
  if (commitment.hash_id != expected_hash)
    throw ValidationError("commitment hash '" + commitment.hash_id + "' cannot be opened in field " +
                          std::string(F::kName) + " (needs " + expected_hash + ")");
  if (claim.require_proximity() && !options.registry)
    throw ValidationError("proximity constraints need the witness registry");

  PublicInputs pub;
  pub.root = commitment.root;
  pub.s1 = options.clock.slot_of(claim.interval_start);
  pub.s2 = options.clock.slot_of(claim.interval_end);
  pub.statement_hash = statement_hash(pub.root, pub.s1, pub.s2);

  const bool c7_in_circuit = schnorr_in_circuit<F>(options.group_id);
  if (c7_in_circuit && !options.binding) throw ValidationError("in-circuit C7 needs the binding signature");

  r1cs::Circuit<F> c(options.with_witness);
  const auto pub_values = public_field_values<F>(pub);
  const Var root_var = c.alloc_public(pub_values[0]);
  const Var s1_var = c.alloc_public(pub_values[1]);
  const Var s2_var = c.alloc_public(pub_values[2]);
  c.alloc_public(pub_values[3]);

  const std::uint64_t max_gap_slots = options.clock.gap_in_slots(claim.max_gap);
  const bool have_paths = !commitment.cells.empty();
  std::optional<Var> prev_slot;

  for (const AttestationSample& s : transcript.samples) {
    const F wid = g::witness_tag<F>(s.witness_id);
    const Var db = c.alloc(F::from_u64(s.db));
    const Var q = c.alloc(F::from_i64(s.cell.q));
    const Var r = c.alloc(F::from_i64(s.cell.r));
    const Var res = c.alloc(F::from_i64(s.cell.resolution));
    const Var slot = c.alloc(F::from_u64(s.slot));
    const Var wid_var = c.alloc(wid);

    c.set_label("C1");
    g::signature_binding<F>(c, {LC(db), LC(q), LC(r), LC(res), LC(slot), LC(wid_var)},
                            g::binding_value<F>(s.db, s.cell, s.slot, wid));

    if (claim.require_proximity()) {
      c.set_label("C2");
      const WitnessRecord* w = options.registry->find(s.witness_id);
      const grid::Point wp = w ? w->position : grid::Point{};
      const grid::Point pp = s.prover_position.value_or(grid::Point{});
      const Var xp = c.alloc(F::from_i64(std::llround(pp.x)));
      const Var yp = c.alloc(F::from_i64(std::llround(pp.y)));
      const LC xw(F::from_i64(std::llround(wp.x)));
      const LC yw(F::from_i64(std::llround(wp.y)));
      g::proximity<F>(c, xp, yp, xw, yw, db, options.db_bits);
      g::nonneg<F>(c, LC(F::from_u64(claim.proximity_m)) - LC(db), options.db_bits);
    }

    c.set_label("C3");
    MembershipPath path;
    if (have_paths) {
      auto it = std::lower_bound(commitment.cells.begin(), commitment.cells.end(), s.cell);
      if (it != commitment.cells.end() && *it == s.cell) {
        path = prove_membership(commitment, s.cell);
      } else {
        path.siblings.assign(commitment.depth, Digest{});
      }
    } else {
      path.siblings.assign(commitment.depth, Digest{});
    }
    const auto path_vars = g::alloc_path<F>(c, path);
    const auto leaf = g::merkle_leaf<F>(c, q, r, res);
    g::merkle<F>(c, leaf, path_vars, root_var, commitment.depth);

    c.set_label("C4");
    g::range<F>(c, slot, s1_var, s2_var, options.slot_bits);

    if (prev_slot) {
      c.set_label("C5");
      g::continuity_step<F>(c, *prev_slot, slot, max_gap_slots);
    }
    prev_slot = slot;
  }

  c.set_label("C6");
  g::coverage<F>(c, transcript.samples.size(), claim.min_samples);

  if (c7_in_circuit) {
    c.set_label("C7");
    const auto& group = group_by_id(options.group_id);
    const Bytes msg = binding_message(pub.statement_hash, claim);
    const Scalar challenge = schnorr_challenge(group, options.binding->R, transcript.prover_pk, msg);
    g::SchnorrWitness w;
    if (transcript.prover_sk) {
      w.sk = TestGroup7::value(*transcript.prover_sk);
      w.nonce = TestGroup7::value(schnorr_nonce(group, *transcript.prover_sk, msg));
    }
    g::schnorr<F>(c, transcript.prover_pk, *options.binding, challenge, w);
  }

  Synthesized<F> out;
  out.pub = pub;
  out.cs = std::move(c).take_system();
  out.assignment = std::move(c).take_assignment();
  return out;
}

}  // namespace polc
