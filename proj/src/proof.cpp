#include "polc/proof.hpp"

#include "polc/errors.hpp"
#include "polc/hash.hpp"
#include "polc/io.hpp"

namespace polc {

Digest statement_hash(const Digest& root, std::uint64_t s1, std::uint64_t s2) {
  ByteWriter w;
  w.raw(root);
  w.u64(s1);
  w.u64(s2);
  return sha256(std::move(w).bytes());
}

Bytes binding_message(const Digest& statement_hash, const dsl::Claim& claim) {
  ByteWriter w;
  w.str("polc/statement/v1");
  w.raw(statement_hash);
  w.blob(dsl::canonical_serialize(claim));
  return std::move(w).bytes();
}

Digest Evidence::transcript_digest() const {
  Sha256 h;
  for (const auto& s : samples) {
    h.update(sample_message(s, prover_pk));
    h.update(s.sig.to_bytes());
  }
  return h.finish();
}

namespace {

ProofBundle build(const ProveRequest& req, bool checked) {
  if (!req.commitment) throw ValidationError("prove needs a region commitment");
  const SchnorrGroup& group = group_by_id(req.group_id);
  const Transcript& t = req.transcript;

  ProofBundle bundle;
  bundle.pub.root = req.commitment->root;
  bundle.pub.s1 = req.clock.slot_of(req.claim.interval_start);
  bundle.pub.s2 = req.clock.slot_of(req.claim.interval_end);
  bundle.pub.statement_hash = statement_hash(bundle.pub.root, bundle.pub.s1, bundle.pub.s2);

  Signature binding;
  if (t.prover_sk) {
    binding = sign(group, Keypair{*t.prover_sk, t.prover_pk}, binding_message(bundle.pub.statement_hash, req.claim));
  } else if (checked) {
    throw ValidationError("the transcript carries no prover secret key");
  }

  SynthesisOptions options;
  options.clock = req.clock;
  options.group_id = req.group_id;
  options.registry = req.registry;
  options.binding = binding;

  bundle.blob = ff::with_field(req.field, [&]<ff::PrimeField F>() -> Bytes {
    auto syn = synthesize<F>(req.claim, *req.commitment, t, options);
    if (checked) {
      const auto sat = r1cs::is_satisfied(syn.cs, syn.assignment);
      if (!sat.ok) throw UnsatisfiedError("constraint " + std::to_string(sat.index) + " fails: " + sat.label);
    }
    MockBackend<F> backend;
    return backend.prove(backend.setup(syn.cs), syn.assignment, binding);
  });
  bundle.backend_id = "mock-r1cs";

  Evidence& e = bundle.evidence;
  e.claim = req.claim;
  e.prover_pk = t.prover_pk;
  e.group_id = req.group_id;
  e.field = req.field;
  e.clock = req.clock;
  e.depth = req.commitment->depth;
  e.hash_id = req.commitment->hash_id;
  e.samples = t.samples;
  for (auto& s : e.samples) s.prover_position.reset();
  e.binding = binding;
  return bundle;
}

}  // namespace

ProofBundle prove_claim(const ProveRequest& req) {
  dsl::validate(req.claim);
  if (!req.registry) throw ValidationError("prove needs the witness registry");
  const SchnorrGroup& group = group_by_id(req.group_id);
  const Transcript& t = req.transcript;
  if (!t.prover_sk) throw ValidationError("the transcript carries no prover secret key");
  if (group.base_mul(*t.prover_sk) != t.prover_pk) throw ValidationError("prover key pair does not match");
  if (t.samples.empty() && req.claim.min_samples > 0)
    throw EmptyTranscriptError("no attestation samples for the claim interval");
  for (const auto& s : t.samples) {
    const WitnessRecord* w = req.registry->find(s.witness_id);
    if (!w) throw SignatureError("sample from unknown witness '" + s.witness_id + "'");
    if (!verify_sample(group, *w, t.prover_pk, s))
      throw SignatureError("bad signature from witness '" + s.witness_id + "' at slot " + std::to_string(s.slot));
  }
  return build(req, true);
}

ProofBundle prove_unchecked(const ProveRequest& req) { return build(req, false); }

VerifyResult verify_bundle(const ProofBundle& bundle, const VerifierContext& ctx) {
  auto reject = [](std::string reason) { return VerifyResult{false, std::move(reason)}; };
  const PublicInputs& pub = bundle.pub;
  const Evidence& e = bundle.evidence;

  if (statement_hash(pub.root, pub.s1, pub.s2) != pub.statement_hash) return reject("statement-hash");
  if (ctx.ledger && !ctx.ledger->lookup(pub.root)) return reject("root-not-anchored");
  if (ctx.expected_root && *ctx.expected_root != pub.root) return reject("root-mismatch");

  if (bundle.backend_id != "mock-r1cs") return reject("unknown-backend");
  if (!ctx.group_id.empty() && ctx.group_id != e.group_id) return reject("group-mismatch");
  if (ctx.field && *ctx.field != e.field) return reject("field-mismatch");
  if (ctx.clock && !(*ctx.clock == e.clock)) return reject("clock-mismatch");
  if (ctx.expected_claim && !(*ctx.expected_claim == e.claim)) return reject("claim-mismatch");
  if (e.hash_id != "poseidon-" + std::string(ff::to_string(e.field))) return reject("hash-mismatch");
  try {
    dsl::validate(e.claim);
    if (e.clock.slot_of(e.claim.interval_start) != pub.s1 || e.clock.slot_of(e.claim.interval_end) != pub.s2)
      return reject("slot-mismatch");
  } catch (const Error&) {
    return reject("claim-invalid");
  }
  if (!ctx.registry) return reject("registry-missing");
  for (const auto& s : e.samples)
    if (!ctx.registry->find(s.witness_id)) return reject("unknown-witness");

  const SchnorrGroup* group = nullptr;
  try {
    group = &group_by_id(e.group_id);
  } catch (const FormatError&) {
    return reject("group-mismatch");
  }

  RegionCommitment public_commitment;
  public_commitment.root = pub.root;
  public_commitment.depth = e.depth;
  public_commitment.hash_id = e.hash_id;
  const Transcript transcript = Transcript::make(e.prover_pk, e.samples);
  if (!(transcript.samples == e.samples)) return reject("sample-order");

  SynthesisOptions options;
  options.clock = e.clock;
  options.group_id = e.group_id;
  options.registry = ctx.registry;
  options.binding = e.binding;
  options.with_witness = false;

  std::string backend_label;
  try {
    backend_label = ff::with_field(e.field, [&]<ff::PrimeField F>() -> std::string {
      const auto syn = synthesize<F>(e.claim, public_commitment, transcript, options);
      if (!(syn.pub == pub)) return "public-input-mismatch";
      MockBackend<F> backend;
      const auto check = backend.verify(backend.setup(syn.cs), pub, bundle.blob, e.binding);
      return check.ok ? std::string() : check.label;
    });
  } catch (const GroupProfileError&) {
    return reject("group-profile");
  } catch (const Error& err) {
    return reject("synthesis:" + err.kind());
  }
  if (!backend_label.empty()) return reject(backend_label);

  if (ctx.expected_prover_pk && *ctx.expected_prover_pk != e.prover_pk) return reject("schnorr-binding");
  if (!group->is_valid(e.prover_pk) ||
      !verify(*group, e.prover_pk, binding_message(pub.statement_hash, e.claim), e.binding))
    return reject("schnorr-binding");

  for (const auto& s : e.samples)
    if (!verify_sample(*group, *ctx.registry->find(s.witness_id), e.prover_pk, s)) return reject("C1-native");

  return {true, {}};
}

nlohmann::ordered_json to_json(const ProofBundle& b) {
  using io::ojson;
  const Evidence& e = b.evidence;
  ojson samples = ojson::array();
  for (const auto& s : e.samples) samples.push_back(io::to_json(s, false));
  ojson evidence;
  evidence["claim"] = dsl::to_json(e.claim);
  evidence["prover_pk_hex"] = to_hex(e.prover_pk);
  evidence["group"] = e.group_id;
  evidence["field"] = ff::to_string(e.field);
  evidence["clock"] = {{"genesis", e.clock.genesis}, {"slot_duration", e.clock.slot_duration}};
  evidence["depth"] = e.depth;
  evidence["hash_id"] = e.hash_id;
  evidence["samples"] = samples;
  evidence["binding_hex"] = to_hex(e.binding.to_bytes());

  ojson j;
  j["backend_id"] = b.backend_id;
  j["public"] = {{"root_hex", to_hex(b.pub.root)},
                 {"s1", b.pub.s1},
                 {"s2", b.pub.s2},
                 {"stmt_hash_hex", to_hex(b.pub.statement_hash)}};
  j["blob_b64"] = to_base64(b.blob);
  j["evidence"] = evidence;
  return j;
}

ProofBundle bundle_from_json(const nlohmann::json& j) {
  try {
    ProofBundle b;
    b.backend_id = j.at("backend_id").get<std::string>();
    const auto& p = j.at("public");
    b.pub.root = digest_from_hex(p.at("root_hex").get<std::string>());
    b.pub.s1 = p.at("s1").get<std::uint64_t>();
    b.pub.s2 = p.at("s2").get<std::uint64_t>();
    b.pub.statement_hash = digest_from_hex(p.at("stmt_hash_hex").get<std::string>());
    b.blob = from_base64(j.at("blob_b64").get<std::string>());
    const auto& ej = j.at("evidence");
    Evidence& e = b.evidence;
    e.claim = dsl::claim_from_json(ej.at("claim"));
    e.prover_pk = io::element_from_hex(ej.at("prover_pk_hex").get<std::string>());
    e.group_id = ej.at("group").get<std::string>();
    e.field = ff::field_profile_from_string(ej.at("field").get<std::string>());
    e.clock.genesis = ej.at("clock").at("genesis").get<std::int64_t>();
    e.clock.slot_duration = ej.at("clock").at("slot_duration").get<std::int64_t>();
    if (e.clock.slot_duration <= 0) throw FormatError("slot_duration must be positive");
    e.depth = ej.at("depth").get<unsigned>();
    e.hash_id = ej.at("hash_id").get<std::string>();
    for (const auto& s : ej.at("samples")) e.samples.push_back(io::sample_from_json(s));
    e.binding = Signature::from_bytes(from_hex(ej.at("binding_hex").get<std::string>()));
    return b;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("bundle: ") + ex.what());
  } catch (const ValidationError& ex) {
    throw FormatError(std::string("bundle: ") + ex.what());
  }
}

}  // namespace polc
