#pragma once

// Proof bundles, the backend interface and the verification pipeline.
//
// The shipped backend ("mock-r1cs") is a constraint-satisfaction check: its
// proof blob carries the full assignment, so it is sound for testing but
// neither succinct nor zero-knowledge. Verification cost grows with the
// number of samples; a succinct backend would implement the same interface.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "polc/attestation.hpp"
#include "polc/dsl.hpp"
#include "polc/merkle.hpp"
#include "polc/slots.hpp"
#include "polc/synthesize.hpp"

namespace polc {

/// Public data a mock-backend verifier needs to rebuild the circuit. The
/// prover's own coordinates and the membership paths stay in the blob.
struct Evidence {
  dsl::Claim claim;
  Element prover_pk{};
  std::string group_id;
  ff::FieldProfile field = ff::FieldProfile::bn254;
  SlotClock clock;
  unsigned depth = 0;
  std::string hash_id;
  std::vector<AttestationSample> samples;  // without prover positions
  Signature binding;                       // prover's Schnorr over binding_message

  Digest transcript_digest() const;
};

struct ProofBundle {
  std::string backend_id;
  PublicInputs pub;
  Bytes blob;
  Evidence evidence;
};

/// setup(cs) -> keys, prove(keys, assignment) -> blob, verify(keys, public, blob).
template <ff::PrimeField F>
class ProofBackend {
 public:
  struct Keys {
    const r1cs::ConstraintSystem<F>* cs = nullptr;
  };
  struct Check {
    bool ok = false;
    std::string label;  // failing constraint label or blob defect
  };

  virtual ~ProofBackend() = default;
  virtual std::string_view id() const = 0;
  virtual Keys setup(const r1cs::ConstraintSystem<F>& cs) const = 0;
  virtual Bytes prove(const Keys& keys, const r1cs::Assignment<F>& assignment, const Signature& binding) const = 0;
  virtual Check verify(const Keys& keys, const PublicInputs& pub, std::span<const std::uint8_t> blob,
                       const Signature& binding) const = 0;
};

/// Blob: magic || field name || num_vars || values (32 B each) || binding R || z || BLAKE2b-256 of all before.
template <ff::PrimeField F>
class MockBackend final : public ProofBackend<F> {
 public:
  using typename ProofBackend<F>::Keys;
  using typename ProofBackend<F>::Check;

  std::string_view id() const override { return "mock-r1cs"; }
  Keys setup(const r1cs::ConstraintSystem<F>& cs) const override { return Keys{&cs}; }

  Bytes prove(const Keys& keys, const r1cs::Assignment<F>& a, const Signature& binding) const override {
    if (a.values.size() != keys.cs->num_vars) throw BackendError("assignment length does not match the system");
    ByteWriter w;
    w.str(kMagic);
    w.str(F::kName);
    w.u64(a.values.size());
    for (const F& v : a.values) w.raw(v.to_bytes_be());
    w.raw(binding.R);
    w.raw(binding.z);
    Bytes out = std::move(w).bytes();
    const Digest d = blake2b256(out);
    out.insert(out.end(), d.begin(), d.end());
    return out;
  }

  Check verify(const Keys& keys, const PublicInputs& pub, std::span<const std::uint8_t> blob,
               const Signature& binding) const override {
    if (blob.size() < 32) return {false, "blob-integrity"};
    const auto body = blob.first(blob.size() - 32);
    const Digest check = blake2b256(body);
    if (!std::equal(check.begin(), check.end(), blob.begin() + body.size())) return {false, "blob-integrity"};
    r1cs::Assignment<F> a;
    try {
      ByteReader r(body);
      if (r.str() != kMagic || r.str() != F::kName) return {false, "blob-format"};
      const std::uint64_t n = r.u64();
      if (n != keys.cs->num_vars || n > r.remaining() / 32) return {false, "blob-format"};
      a.values.reserve(n);
      for (std::uint64_t i = 0; i < n; ++i) {
        const auto bytes = r.raw(32);
        const F v = F::from_bytes_be(bytes);
        const auto canonical = v.to_bytes_be();
        if (!std::equal(canonical.begin(), canonical.end(), bytes.begin())) return {false, "blob-format"};
        a.values.push_back(v);
      }
      Signature s;
      const auto R = r.raw(32);
      std::copy(R.begin(), R.end(), s.R.begin());
      const auto z = r.raw(32);
      std::copy(z.begin(), z.end(), s.z.begin());
      if (!r.done()) return {false, "blob-format"};
      if (!(s == binding)) return {false, "schnorr-binding"};
    } catch (const FormatError&) {
      return {false, "blob-format"};
    }
    const auto expected = public_field_values<F>(pub);
    if (keys.cs->num_public != expected.size()) return {false, "public-input-mismatch"};
    for (std::size_t i = 0; i < expected.size(); ++i)
      if (!(a.values[i] == expected[i])) return {false, "public-input-mismatch"};
    const auto sat = r1cs::is_satisfied(*keys.cs, a);
    if (!sat.ok) return {false, sat.label.empty() ? "unsatisfied" : sat.label};
    return {true, {}};
  }

 private:
  static constexpr std::string_view kMagic = "POLC-MOCK/1";
};

struct ProveRequest {
  dsl::Claim claim;
  const RegionCommitment* commitment = nullptr;
  Transcript transcript;  // must carry prover_sk
  const WitnessRegistry* registry = nullptr;
  std::string group_id = "ristretto255";
  ff::FieldProfile field = ff::FieldProfile::bn254;
  SlotClock clock;
};

/// Honest prover. Checks every sample signature natively, synthesizes, and
/// refuses unsatisfiable instances. Throws SignatureError, EmptyTranscriptError
/// (no samples while the claim needs some), UnsatisfiedError (with the first
/// failing gadget label), ValidationError.
ProofBundle prove_claim(const ProveRequest& request);

/// Builds a bundle without any of the honest prover's checks; the adversary
/// harness uses it to submit false statements.
ProofBundle prove_unchecked(const ProveRequest& request);

struct VerifierContext {
  const WitnessRegistry* registry = nullptr;
  const LedgerSim* ledger = nullptr;
  /// Group and field the verifier accepts; empty/unset accepts the bundle's.
  std::string group_id;
  std::optional<ff::FieldProfile> field;
  std::optional<SlotClock> clock;
  /// When set, the bundle must prove exactly this claim for this key.
  std::optional<dsl::Claim> expected_claim;
  std::optional<Element> expected_prover_pk;
  /// Canonical root of the claimed region, when the verifier knows it.
  std::optional<Digest> expected_root;
};

struct VerifyResult {
  bool accepted = false;
  std::string reason;  // first failed check
  explicit operator bool() const { return accepted; }
};

/// Checks in order: statement-hash, root-not-anchored, root, claim and slot
/// consistency, backend (reason = failing gadget label), schnorr-binding,
/// C1-native (witness signatures).
VerifyResult verify_bundle(const ProofBundle& bundle, const VerifierContext& context);

nlohmann::ordered_json to_json(const ProofBundle& bundle);
ProofBundle bundle_from_json(const nlohmann::json& j);  // throws FormatError

}  // namespace polc
