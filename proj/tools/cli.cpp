#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "polc/errors.hpp"
#include "polc/io.hpp"
#include "polc/proof.hpp"
#include "polc/scenario.hpp"

namespace polc::cli {

namespace {

namespace fs = std::filesystem;
using io::ojson;

constexpr std::int64_t kDefaultGenesis = 1606824023;

constexpr const char* kSchemas = R"(File formats (JSON unless noted):
  region      {name, frame: "local"|"lonlat", ref_latitude?, vertices: [[x,y],...],
               resolution?, hash_id?}   local frame is metres east/north
  commitment  {name, root_hex, resolution, hash_id, depth, k, cells: [[q,r],...]}
  claim       DSL text, or {prover_id, region, interval_start, interval_end,
               min_samples, max_gap, flags, proximity_m}
  transcript  {prover_pk_hex, group, samples: [{witness_id, sig_hex, db,
               cell: [q,r,res], slot, prover_position?: [x,y]}]}
  registry    {group, witnesses: [{witness_id, pk_hex, position: [x,y], cell: [q,r,res]}]}
  key         {group, sk_hex, pk_hex}
  ledger      JSON lines {slot, digest_hex}
  bundle      {backend_id, public: {root_hex, s1, s2, stmt_hash_hex}, blob_b64,
               evidence: {claim, prover_pk_hex, group, field, clock: {genesis,
               slot_duration}, depth, hash_id, samples, binding_hex}}
  scenario    {preset, trust_model?, interaction?, precision_m?, witness_count?,
               adversary?, rng_seed?, group?, field?, quorum?, noise_m?,
               relay_delay_m?}, or an array of such objects
Exit codes: 0 accept/success, 1 reject, 2 usage or I/O error, 3 internal error.)";

struct ClockFlags {
  std::int64_t genesis = kDefaultGenesis;
  std::int64_t slot_duration = 12;
  SlotClock clock() const {
    if (slot_duration <= 0) throw ValidationError("--slot-duration must be positive");
    return {genesis, slot_duration};
  }
};

void add_clock_flags(CLI::App* cmd, ClockFlags& f) {
  cmd->add_option("--genesis", f.genesis, "ledger genesis, UTC seconds")->capture_default_str();
  cmd->add_option("--slot-duration", f.slot_duration, "seconds per slot")->capture_default_str();
}

std::int64_t parse_time(const std::string& text) {
  if (!text.empty() && text.find_first_not_of("0123456789-") == std::string::npos) {
    try {
      return std::stoll(text);
    } catch (const std::exception&) {
      throw ValidationError("bad time '" + text + "'");
    }
  }
  return dsl::parse_iso8601(text);
}

dsl::Claim read_claim(const fs::path& path) {
  const std::string text = io::read_text(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return dsl::claim_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  }
  return dsl::parse_claim(text);
}

LedgerSim read_ledger(const fs::path& path) { return LedgerSim::import_jsonl(io::read_text(path)); }

std::string field_of_hash(const std::string& hash_id) {
  constexpr std::string_view prefix = "poseidon-";
  if (hash_id.rfind(prefix, 0) != 0)
    throw ValidationError("commitment hash '" + hash_id + "' is not a circuit hash");
  return hash_id.substr(prefix.size());
}

// ---- commit ------------------------------------------------------------------

struct CommitArgs {
  std::string region;
  std::optional<int> resolution;
  std::optional<std::string> hash_id;
  std::optional<std::string> name;
  std::string out;
  std::optional<std::string> ledger;
  std::optional<std::uint64_t> slot;
  std::optional<std::string> now;
  ClockFlags clock;
};

int cmd_commit(const CommitArgs& a, std::ostream& out) {
  const auto j = io::read_json(a.region);
  const io::RegionFile region = io::region_from_json(j);
  const int res = a.resolution ? *a.resolution : j.value("resolution", grid::kDefaultResolution);
  const std::string hash_id = a.hash_id ? *a.hash_id : j.value("hash_id", std::string("poseidon-bn254"));
  const auto cells = grid::rasterize(region.vertices, grid::HexGrid(res));
  const RegionCommitment c = commit(cells, hasher_by_id(hash_id), a.name ? *a.name : region.name);
  io::write_json(a.out, io::to_json(c));

  if (a.ledger) {
    LedgerSim ledger = fs::exists(*a.ledger) ? read_ledger(*a.ledger) : LedgerSim{};
    std::uint64_t slot = ledger.current_slot();
    if (a.slot) slot = *a.slot;
    if (a.now) slot = a.clock.clock().slot_of(parse_time(*a.now));
    ledger.anchor(slot, c.root);
    io::write_text(*a.ledger, ledger.export_jsonl());
    out << "anchored slot=" << slot << "\n";
  }
  out << "k=" << c.size() << " depth=" << c.depth << " root=" << to_hex(c.root) << "\n";
  return kAccept;
}

// ---- prove -------------------------------------------------------------------

struct ProveArgs {
  std::string claim, commitment, transcript, registry, key, out;
  std::optional<std::string> group;
  ClockFlags clock;
};

int cmd_prove(const ProveArgs& a, std::ostream& out) {
  const dsl::Claim claim = read_claim(a.claim);
  const RegionCommitment commitment = io::commitment_from_json(io::read_json(a.commitment));
  const auto tj = io::read_json(a.transcript);
  Transcript transcript = io::transcript_from_json(tj);
  const WitnessRegistry registry = io::registry_from_json(io::read_json(a.registry));
  const auto kj = io::read_json(a.key);
  const Keypair key = io::key_from_json(kj);
  if (key.pk != transcript.prover_pk) throw ValidationError("key does not match the transcript's prover");
  transcript.prover_sk = key.sk;

  ProveRequest req;
  req.claim = claim;
  req.commitment = &commitment;
  req.transcript = std::move(transcript);
  req.registry = &registry;
  req.group_id = a.group ? *a.group : tj.value("group", std::string("ristretto255"));
  req.field = ff::field_profile_from_string(field_of_hash(commitment.hash_id));
  req.clock = a.clock.clock();

  const ProofBundle bundle = prove_claim(req);
  io::write_json(a.out, to_json(bundle));
  out << "s1=" << bundle.pub.s1 << " s2=" << bundle.pub.s2 << " samples=" << bundle.evidence.samples.size()
      << " stmt_hash=" << to_hex(bundle.pub.statement_hash) << "\n";
  return kAccept;
}

// ---- verify ------------------------------------------------------------------

struct VerifyArgs {
  std::string bundle, registry;
  std::optional<std::string> ledger, commitment, claim, prover_pk, group, field;
  std::optional<std::int64_t> genesis, slot_duration;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const ProofBundle bundle = bundle_from_json(io::read_json(a.bundle));
  const WitnessRegistry registry = io::registry_from_json(io::read_json(a.registry));
  std::optional<LedgerSim> ledger;
  if (a.ledger) ledger = read_ledger(*a.ledger);

  VerifierContext ctx;
  ctx.registry = &registry;
  ctx.ledger = ledger ? &*ledger : nullptr;
  if (a.group) ctx.group_id = *a.group;
  if (a.field) ctx.field = ff::field_profile_from_string(*a.field);
  if (a.genesis || a.slot_duration)
    ctx.clock = SlotClock{a.genesis.value_or(kDefaultGenesis), a.slot_duration.value_or(12)};
  if (a.commitment) ctx.expected_root = io::commitment_from_json(io::read_json(*a.commitment)).root;
  if (a.claim) ctx.expected_claim = read_claim(*a.claim);
  if (a.prover_pk) ctx.expected_prover_pk = io::element_from_hex(*a.prover_pk);

  const VerifyResult v = verify_bundle(bundle, ctx);
  if (v.accepted) {
    out << "accept\n";
    return kAccept;
  }
  out << "reject " << v.reason << "\n";
  return kReject;
}

// ---- simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::optional<std::string> scenario;
  std::optional<std::string> preset, adversary;
  std::size_t trials = 1;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::optional<std::string> out, report, export_dir;
};

void export_artifacts(const fs::path& dir, const scenario::ScenarioConfig& config) {
  scenario::ScenarioArtifacts art;
  scenario::run_scenario(config, &art);
  const scenario::World& w = art.world;
  fs::create_directories(dir);

  ojson region = io::to_json(io::RegionFile{w.commitment.name, w.region});
  region["resolution"] = w.grid.resolution();
  region["hash_id"] = w.commitment.hash_id;
  io::write_json(dir / "region.json", region);
  io::write_json(dir / "commitment.json", io::to_json(w.commitment));
  io::write_text(dir / "ledger.jsonl", w.ledger.export_jsonl());
  io::write_json(dir / "registry.json", io::to_json(w.registry, config.group_id));
  io::write_json(dir / "prover_key.json", io::key_json(w.prover, config.group_id));
  io::write_json(dir / "transcript.json", io::to_json(w.transcript, config.group_id));
  io::write_text(dir / "claim.polc", dsl::pretty_print(w.claim));
  io::write_json(dir / "claim.json", dsl::to_json(w.claim));
  io::write_json(dir / "scenario.json", scenario::to_json(config));
  if (art.has_bundle) io::write_json(dir / "bundle.json", to_json(art.bundle));
}

std::vector<scenario::ScenarioConfig> read_configs(const SimulateArgs& a) {
  std::vector<scenario::ScenarioConfig> configs;
  if (a.scenario) {
    const auto j = io::read_json(*a.scenario);
    if (j.is_array()) {
      for (const auto& c : j) configs.push_back(scenario::config_from_json(c));
    } else {
      configs.push_back(scenario::config_from_json(j));
    }
  } else {
    configs.push_back(scenario::preset_config(a.preset.value_or("retail")));
  }
  for (auto& c : configs) {
    if (a.scenario && a.preset) throw ValidationError("--preset conflicts with a scenario file");
    if (a.adversary) c.adversary = scenario::adversary_from_string(*a.adversary);
    if (a.seed) c.rng_seed = *a.seed;
    c.validate();
  }
  return configs;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto configs = read_configs(a);
  if (a.export_dir) {
    export_artifacts(*a.export_dir, configs.front());
    out << "exported " << to_string(configs.front().adversary) << " scenario to " << *a.export_dir << "\n";
    return kAccept;
  }
  const scenario::BatchResult batch = scenario::run_batch(configs, a.trials, a.workers);
  if (a.out) io::write_text(*a.out, batch.jsonl());
  if (a.report) io::write_json(*a.report, batch.report.to_json());
  out << batch.report.table();
  return kAccept;
}

bool is_refusal(const Error& e) {
  return dynamic_cast<const UnsatisfiedError*>(&e) || dynamic_cast<const SignatureError*>(&e) ||
         dynamic_cast<const EmptyTranscriptError*>(&e) || dynamic_cast<const NotMemberError*>(&e);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"polc: proof-of-location claims over committed regions and ledger slots", "polc"};
  app.footer(kSchemas);
  app.require_subcommand(1);
  app.fallthrough();
  bool timing = false;
  app.add_flag("--timing", timing, "print elapsed time to stderr");

  CommitArgs ca;
  auto* commit_cmd = app.add_subcommand("commit", "rasterize a region, commit its cells, anchor the root");
  commit_cmd->add_option("region", ca.region, "region file")->required();
  commit_cmd->add_option("--resolution", ca.resolution, "grid resolution (default: region file, else 9)");
  commit_cmd->add_option("--hash", ca.hash_id, "poseidon-bn254 | poseidon-m61 | sha256");
  commit_cmd->add_option("--name", ca.name, "region name stored in the commitment");
  commit_cmd->add_option("--out", ca.out, "commitment file to write")->required();
  commit_cmd->add_option("--ledger", ca.ledger, "ledger file to append the root to");
  auto* slot_opt = commit_cmd->add_option("--slot", ca.slot, "anchor slot (default: ledger head)");
  commit_cmd->add_option("--now", ca.now, "anchor at the slot of this time (UTC seconds or ISO-8601)")
      ->excludes(slot_opt);
  add_clock_flags(commit_cmd, ca.clock);

  ProveArgs pa;
  auto* prove_cmd = app.add_subcommand("prove", "build a proof bundle from a claim and a transcript");
  prove_cmd->add_option("claim", pa.claim, "claim file")->required();
  prove_cmd->add_option("commitment", pa.commitment, "commitment file")->required();
  prove_cmd->add_option("transcript", pa.transcript, "transcript file")->required();
  prove_cmd->add_option("--registry", pa.registry, "witness registry file")->required();
  prove_cmd->add_option("--key", pa.key, "prover key file")->required();
  prove_cmd->add_option("--group", pa.group, "signature group (default: transcript's)");
  prove_cmd->add_option("--out", pa.out, "bundle file to write")->required();
  add_clock_flags(prove_cmd, pa.clock);

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "check a proof bundle; prints accept or reject <label>");
  verify_cmd->add_option("bundle", va.bundle, "bundle file")->required();
  verify_cmd->add_option("--registry", va.registry, "witness registry file")->required();
  verify_cmd->add_option("--ledger", va.ledger, "ledger file; the root must be anchored");
  verify_cmd->add_option("--commitment", va.commitment, "expected region commitment");
  verify_cmd->add_option("--claim", va.claim, "expected claim");
  verify_cmd->add_option("--prover-pk", va.prover_pk, "expected prover public key (hex)");
  verify_cmd->add_option("--group", va.group, "accepted signature group");
  verify_cmd->add_option("--field", va.field, "accepted circuit field: bn254 | m61");
  verify_cmd->add_option("--genesis", va.genesis, "expected ledger genesis");
  verify_cmd->add_option("--slot-duration", va.slot_duration, "expected slot duration");

  SimulateArgs sa;
  auto* sim_cmd = app.add_subcommand("simulate", "run seeded scenarios and report accept rates");
  sim_cmd->add_option("scenario", sa.scenario, "scenario file");
  sim_cmd->add_option("--preset", sa.preset, "retail | supply-chain | e-voting | roadx (without a file)");
  sim_cmd->add_option("--adversary", sa.adversary, "override the adversary");
  sim_cmd->add_option("--trials", sa.trials, "seeds per scenario, counting up from the seed")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sa.seed, "first seed (default: file's rng_seed)");
  sim_cmd->add_option("--workers", sa.workers, "worker threads")->capture_default_str();
  sim_cmd->add_option("--out", sa.out, "per-scenario results, JSON lines");
  sim_cmd->add_option("--report", sa.report, "summary report, JSON");
  sim_cmd->add_option("--export", sa.export_dir, "write the first scenario's files to this directory");

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kAccept : kUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int code = kInternal;
  try {
    if (*commit_cmd) code = cmd_commit(ca, out);
    else if (*prove_cmd) code = cmd_prove(pa, out);
    else if (*verify_cmd) code = cmd_verify(va, out);
    else code = cmd_simulate(sa, out);
  } catch (const Error& e) {
    if (is_refusal(e)) {
      out << "reject " << e.kind() << "\n";
      err << e.kind() << ": " << e.what() << "\n";
      code = kReject;
    } else {
      err << e.kind() << ": " << e.what() << "\n";
      code = kUsage;
    }
  } catch (const fs::filesystem_error& e) {
    err << "FormatError: " << e.what() << "\n";
    code = kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    code = kInternal;
  }
  if (timing)
    err << "elapsed_ms="
        << std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() << "\n";
  return code;
}

}  // namespace polc::cli
