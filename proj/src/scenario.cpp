#include "polc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "polc/errors.hpp"
#include "polc/hash.hpp"

namespace polc::scenario {

namespace {

constexpr std::int64_t kEthereumGenesis = 1606824023;  // beacon chain genesis, UTC
constexpr double kFarAway = 20000;                     // metres east of any region
constexpr std::int64_t kReplayShift = 3600;

template <class E>
struct NameTable {
  E value;
  std::string_view name;
};

constexpr NameTable<TrustModel> kTrustNames[] = {
    {TrustModel::centralized_anchor, "centralized-anchor"},
    {TrustModel::partially_distributed, "partially-distributed"},
    {TrustModel::decentralized_quorum, "decentralized-quorum"},
};
constexpr NameTable<Interaction> kInteractionNames[] = {
    {Interaction::interactive, "interactive"},
    {Interaction::non_interactive, "non-interactive"},
};
constexpr NameTable<Adversary> kAdversaryNames[] = {
    {Adversary::none, "none"},
    {Adversary::teleport, "teleport"},
    {Adversary::outside_region, "outside-region"},
    {Adversary::slot_shift, "slot-shift"},
    {Adversary::forge_signature, "forge-signature"},
    {Adversary::replay_proof, "replay-proof"},
    {Adversary::transfer_proof, "transfer-proof"},
    {Adversary::relay_delay, "relay-delay"},
};

template <class E, std::size_t N>
std::string_view name_of(const NameTable<E> (&table)[N], E v) {
  for (const auto& e : table)
    if (e.value == v) return e.name;
  return "?";
}

template <class E, std::size_t N>
E value_of(const NameTable<E> (&table)[N], std::string_view s, std::string_view what) {
  for (const auto& e : table)
    if (e.name == s) return e.value;
  throw ValidationError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

std::string canonical_preset(std::string_view p) {
  if (p == "evoting") return "e-voting";
  if (p == "supply" || p == "supplychain") return "supply-chain";
  if (p == "road-x") return "roadx";
  if (p == "retail" || p == "supply-chain" || p == "e-voting" || p == "roadx") return std::string(p);
  throw ValidationError("unknown preset '" + std::string(p) + "'");
}

struct Shape {
  std::int64_t start;      // t1
  std::int64_t span;       // t2 - t1
  std::size_t times;       // sampling instants
  std::int64_t period;     // seconds between instants
  std::int64_t offset;     // first instant after t1
  std::int64_t max_gap;    // claim gap bound, seconds
  double region_cells;     // disc radius in cell spacings (0: road strip)
  double region_radius_m;  // fixed disc radius, overrides region_cells
  double interactive_range_m = 80;
  std::uint64_t proximity_m = 8;
  std::string region_name;
};

Shape shape_of(const std::string& preset) {
  if (preset == "retail")
    return {dsl::parse_iso8601("2025-05-12T10:00:00Z"), 600, 8, 60, 30, 120, 5, 0, 80, 8, "store"};
  if (preset == "supply-chain")
    return {dsl::parse_iso8601("2025-05-12T06:00:00Z"), 900, 12, 60, 30, 120, 5, 0, 80, 8, "depot"};
  if (preset == "e-voting")
    return {dsl::parse_iso8601("2025-05-12T09:00:00Z"), 300, 6, 24, 12, 60, 0, 20, 80, 8, "polling_station"};
  return {dsl::parse_iso8601("2025-05-12T08:00:00Z"), 1200, 40, 30, 15, 60, 0, 0, 80, 8, "road_x"};
}

constexpr double kRoadLength = 6000;
constexpr double kRoadHalfWidth = 60;

enum class Engage { inside, outside, none };

struct Instant {
  std::int64_t time;
  grid::Point position;  // true position
  Engage engage = Engage::inside;
  bool relayed = false;
};

grid::Point rounded(grid::Point p) { return {std::round(p.x), std::round(p.y)}; }

double distance(grid::Point a, grid::Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

class Generator {
 public:
  explicit Generator(const ScenarioConfig& config, ScenarioArtifacts* out = nullptr)
      : out_(out),
        cfg_(config),
        preset_(canonical_preset(config.preset)),
        shape_(shape_of(preset_)),
        rng_(seed_of(config)),
        group_(group_by_id(config.group_id)) {
    cfg_.validate();
  }

  World honest_world() {
    World w;
    w.clock = SlotClock::ethereum(kEthereumGenesis);
    w.grid = grid::HexGrid(preset_ == "roadx" ? grid::kDefaultResolution : grid::resolution_for_precision(cfg_.precision_m));
    grid_ = w.grid;
    w.region = make_region();
    const auto cells = grid::rasterize(w.region, w.grid);
    w.commitment = commit(cells, hasher_by_id("poseidon-" + std::string(ff::to_string(cfg_.field))), shape_.region_name);
    const std::uint64_t s1 = w.clock.slot_of(shape_.start);
    w.ledger.anchor(s1 > 100 ? s1 - 100 : 0, w.commitment.root);

    place_witnesses(w, cells);
    w.prover = keygen(group_, rng_());
    w.claim = make_claim();
    plan_ = honest_plan(w);
    w.trajectory = trajectory_of("p", plan_);
    w.transcript = attest_plan(w, plan_, w.prover);
    return w;
  }

  ScenarioResult run() {
    ScenarioResult result;
    result.scenario = preset_ + "/" + std::string(to_string(cfg_.adversary)) + "/seed=" + std::to_string(cfg_.rng_seed);
    try {
      World w = honest_world();
      run_adversary(w, result);
      if (out_) out_->world = std::move(w);
    } catch (const Error& e) {
      result.verdict = false;
      result.failure_label = "error:" + e.kind();
    }
    return result;
  }

 private:
  static std::uint64_t seed_of(const ScenarioConfig& c) {
    Sha256 h;
    h.update("polc/scenario/seed/v1");
    h.update(canonical_preset(c.preset));
    h.update(to_string(c.adversary));
    ByteWriter w;
    w.u64(c.rng_seed);
    h.update(std::move(w).bytes());
    const Digest d = h.finish();
    std::uint64_t s = 0;
    for (int i = 0; i < 8; ++i) s = (s << 8) | d[i];
    return s;
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  bool interactive() const { return cfg_.interaction == Interaction::interactive; }
  bool quorum_mode() const { return interactive() || cfg_.trust_model == TrustModel::decentralized_quorum; }
  double spacing() const { return grid_.edge() * std::numbers::sqrt3; }

  double disc_radius() const {
    return shape_.region_radius_m > 0 ? shape_.region_radius_m : shape_.region_cells * spacing();
  }

  grid::Ring make_region() {
    if (preset_ == "roadx")
      return {{0, -kRoadHalfWidth}, {kRoadLength, -kRoadHalfWidth}, {kRoadLength, kRoadHalfWidth}, {0, kRoadHalfWidth}};
    grid::Ring ring;
    const double base = disc_radius();
    const double theta0 = uniform(0, std::numbers::pi / 4);
    for (int k = 0; k < 8; ++k) {
      const double a = theta0 + k * std::numbers::pi / 4;
      const double r = base * uniform(0.92, 1.08);
      ring.push_back({std::round(r * std::cos(a) * 100) / 100, std::round(r * std::sin(a) * 100) / 100});
    }
    return ring;
  }

  double region_extent(const World& w) const {
    double m = 0;
    for (const auto& p : w.region) m = std::max(m, std::hypot(p.x, p.y));
    return m;
  }

  WitnessIdentity make_witness(const std::string& id, const grid::CellId& cell, double range) {
    WitnessIdentity wi;
    wi.witness_id = id;
    wi.keys = keygen(group_, rng_());
    wi.position = rounded(grid_.center(cell));
    wi.cell = grid_.locate(wi.position);
    wi.max_range_m = range;
    return wi;
  }

  void place_witnesses(World& w, const std::vector<grid::CellId>& cells) {
    auto member = [&](const grid::CellId& c) { return std::binary_search(cells.begin(), cells.end(), c); };
    std::vector<grid::CellId> interior;
    for (const auto& c : cells) {
      const auto n = grid_.neighbors(c);
      if (std::all_of(n.begin(), n.end(), member)) interior.push_back(c);
    }
    const double trust = interactive() ? shape_.interactive_range_m : 0.99 * 2 * grid_.edge();

    std::vector<grid::CellId> chosen;
    if (preset_ == "roadx") {
      std::vector<grid::CellId> row;
      for (const auto& c : interior)
        if (c.r == 0) row.push_back(c);
      const std::size_t n = std::min<std::size_t>(cfg_.witness_count, row.size());
      for (std::size_t i = 0; i < n; ++i) chosen.push_back(row[n == 1 ? row.size() / 2 : i * (row.size() - 1) / (n - 1)]);
    } else if (interactive()) {
      if (cfg_.witness_count > 3) throw ValidationError("interactive presets support at most 3 co-located witnesses");
      std::shuffle(interior.begin(), interior.end(), rng_);
      auto is_interior = [&](const grid::CellId& c) {
        return std::find(interior.begin(), interior.end(), c) != interior.end();
      };
      for (const auto& c : interior) {
        const auto n = grid_.neighbors(c);
        for (std::size_t k = 0; k < 6 && chosen.empty(); ++k)
          if (is_interior(n[k]) && is_interior(n[(k + 1) % 6])) chosen = {c, n[k], n[(k + 1) % 6]};
        if (!chosen.empty()) break;
      }
      if (chosen.empty()) throw ValidationError("region too small for three adjacent interior witnesses");
      chosen.resize(cfg_.witness_count);
    } else {
      if (interior.size() < cfg_.witness_count) throw ValidationError("region has too few interior cells");
      std::shuffle(interior.begin(), interior.end(), rng_);
      chosen.assign(interior.begin(), interior.begin() + cfg_.witness_count);
    }
    if (chosen.empty()) throw ValidationError("no witness placement");
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      char id[32];
      std::snprintf(id, sizeof id, "w%03zu", i);
      w.witnesses.push_back(make_witness(id, chosen[i], trust));
    }
    inside_count_ = w.witnesses.size();

    grid::Point probe;
    if (preset_ == "roadx") {
      probe = {kRoadLength / 2, kRoadHalfWidth + 3 * spacing()};
    } else {
      const double a = uniform(0, 2 * std::numbers::pi);
      const double r = region_extent(w) + 3 * spacing();
      probe = {r * std::cos(a), r * std::sin(a)};
    }
    grid::CellId outside = grid_.locate(probe);
    while (member(outside)) outside = grid_.locate(probe = {probe.x * 1.5, probe.y * 1.5});
    w.witnesses.push_back(make_witness("x000", outside, interactive() ? shape_.interactive_range_m : grid_.inradius()));

    for (const auto& wi : w.witnesses) w.registry.add(wi);
  }

  dsl::Claim make_claim() const {
    dsl::Claim c;
    c.prover_id = "p";
    c.region = {shape_.region_name, {}};
    c.interval_start = shape_.start;
    c.interval_end = shape_.start + shape_.span;
    c.max_gap = shape_.max_gap;
    c.min_samples = preset_ == "roadx" ? shape_.times : shape_.times - 1;
    c.flags = dsl::kRequireNontransferability;
    if (interactive()) {
      c.flags |= dsl::kRequireProximity;
      c.proximity_m = shape_.proximity_m;
    }
    return c;
  }

  std::size_t attesters() const {
    return cfg_.quorum == 0 ? inside_count_ : std::min<std::size_t>(cfg_.quorum, inside_count_);
  }

  grid::Point honest_position(const World& w, std::size_t j) {
    if (preset_ == "roadx") {
      const double x = 150 + (kRoadLength - 300) * static_cast<double>(j) / static_cast<double>(shape_.times - 1);
      return rounded({x, uniform(-8, 8)});
    }
    if (interactive()) {
      grid::Point c{0, 0};
      for (std::size_t i = 0; i < inside_count_; ++i) {
        c.x += w.witnesses[i].position.x / static_cast<double>(inside_count_);
        c.y += w.witnesses[i].position.y / static_cast<double>(inside_count_);
      }
      return rounded({c.x + uniform(-1, 1), c.y + uniform(-1, 1)});
    }
    const auto& anchor = w.witnesses[j % inside_count_].position;
    const double a = uniform(0, 2 * std::numbers::pi);
    const double r = uniform(0, 0.8 * grid_.edge());
    return rounded({anchor.x + r * std::cos(a), anchor.y + r * std::sin(a)});
  }

  std::vector<Instant> honest_plan(const World& w) {
    std::vector<Instant> plan;
    for (std::size_t j = 0; j < shape_.times; ++j)
      plan.push_back({shape_.start + shape_.offset + static_cast<std::int64_t>(j) * shape_.period, honest_position(w, j)});
    return plan;
  }

  static logic::Trajectory trajectory_of(const std::string& prover, const std::vector<Instant>& plan) {
    logic::Trajectory t;
    t.prover_id = prover;
    for (const auto& i : plan) t.samples.push_back({i.time, i.position.x, i.position.y});
    return t;
  }

  std::vector<const WitnessIdentity*> engaged(const World& w, const Instant& in) const {
    std::vector<const WitnessIdentity*> out;
    if (in.engage == Engage::none) return out;
    if (in.engage == Engage::outside) return {&w.witnesses.back()};
    for (std::size_t i = 0; i < inside_count_; ++i) out.push_back(&w.witnesses[i]);
    std::stable_sort(out.begin(), out.end(), [&](const WitnessIdentity* a, const WitnessIdentity* b) {
      return distance(a->position, in.position) < distance(b->position, in.position);
    });
    out.resize(quorum_mode() ? attesters() : 1);
    return out;
  }

  Transcript attest_plan(const World& w, const std::vector<Instant>& plan, const Keypair& prover) {
    std::vector<AttestationSample> samples;
    for (const auto& in : plan) {
      ChannelModel channel{cfg_.noise_m, in.relayed ? cfg_.relay_delay_m : 0.0};
      for (const WitnessIdentity* wi : engaged(w, in)) {
        try {
          samples.push_back(attest(group_, *wi, prover.pk, in.position, w.clock, in.time, channel, rng_));
        } catch (const ValidationError&) {
          // witness refuses: prover out of its range
        }
      }
    }
    return Transcript::make(prover.pk, std::move(samples), prover.sk);
  }

  grid::Point far(grid::Point p) const { return {p.x + kFarAway, p.y}; }

  VerifierContext verifier(const World& w, const dsl::Claim& claim, const Element& presenter) const {
    VerifierContext ctx;
    ctx.registry = &w.registry;
    ctx.ledger = &w.ledger;
    ctx.group_id = cfg_.group_id;
    ctx.field = cfg_.field;
    ctx.clock = w.clock;
    ctx.expected_claim = claim;
    ctx.expected_prover_pk = presenter;
    ctx.expected_root = w.commitment.root;
    return ctx;
  }

  ProveRequest request(const World& w, const dsl::Claim& claim, Transcript transcript) const {
    ProveRequest r;
    r.claim = claim;
    r.commitment = &w.commitment;
    r.transcript = std::move(transcript);
    r.registry = &w.registry;
    r.group_id = cfg_.group_id;
    r.field = cfg_.field;
    r.clock = w.clock;
    return r;
  }

  void finish(ScenarioResult& result, const World& w, const dsl::Claim& claim, const logic::Trajectory& truth,
              const ProofBundle& bundle, const Element& presenter) {
    logic::Environment env;
    env.grid = w.grid;
    env.clock = w.clock;
    env.regions[claim.region.name] = w.commitment.cells;
    result.ground_truth = logic::eval(claim, truth, env);
    result.samples = bundle.evidence.samples.size();
    const VerifyResult v = verify_bundle(bundle, verifier(w, claim, presenter));
    result.verdict = v.accepted;
    result.failure_label = v.reason;
    if (out_) {
      out_->bundle = bundle;
      out_->presented_claim = claim;
      out_->presenter = presenter;
      out_->has_bundle = true;
    }
  }

  void run_adversary(World& w, ScenarioResult& result) {
    const dsl::Claim& claim = w.claim;
    std::vector<Instant> plan = plan_;

    switch (cfg_.adversary) {
      case Adversary::none: {
        const auto bundle = prove_claim(request(w, claim, w.transcript));
        finish(result, w, claim, w.trajectory, bundle, w.prover.pk);
        return;
      }
      case Adversary::teleport: {
        const std::uint64_t gap = w.clock.gap_in_slots(claim.max_gap);
        const std::size_t k = index(1, plan.size() - 2);
        const std::int64_t prev = plan[k - 1].time;
        const std::int64_t resume = w.clock.slot_start(w.clock.slot_of(prev) + gap + 1) + 1;
        const std::int64_t shift = resume - plan[k].time;
        for (std::size_t j = k; j < plan.size(); ++j) plan[j].time += shift;
        Instant away{prev + (resume - prev) / 2, far(plan[k - 1].position), Engage::none};
        plan.insert(plan.begin() + static_cast<std::ptrdiff_t>(k), away);
        std::erase_if(plan, [&](const Instant& i) { return i.time > claim.interval_end; });
        break;
      }
      case Adversary::outside_region: {
        const std::size_t k = index(1, plan.size() - 3);
        const grid::Point base = w.witnesses.back().position;
        for (std::size_t j = k; j < k + 2; ++j) {
          plan[j].position = rounded({base.x + uniform(-1, 1), base.y + uniform(-1, 1)});
          plan[j].engage = Engage::outside;
        }
        break;
      }
      case Adversary::slot_shift:
        for (auto& i : plan) i.time += shape_.span + 600;
        break;
      case Adversary::forge_signature: {
        std::vector<AttestationSample> forged;
        for (const auto& in : plan) {
          for (const WitnessIdentity* wi : engaged(w, in)) {
            AttestationSample s;
            s.witness_id = wi->witness_id;
            for (auto& b : s.sig.R) b = static_cast<std::uint8_t>(rng_());
            for (auto& b : s.sig.z) b = static_cast<std::uint8_t>(rng_());
            s.db = static_cast<std::uint64_t>(std::ceil(distance(in.position, wi->position)));
            s.cell = wi->cell;
            s.slot = w.clock.slot_of(in.time);
            s.prover_position = in.position;
            forged.push_back(std::move(s));
          }
        }
        auto truth = plan;
        for (auto& i : truth) i.position = far(i.position);
        const auto bundle =
            prove_unchecked(request(w, claim, Transcript::make(w.prover.pk, std::move(forged), w.prover.sk)));
        finish(result, w, claim, trajectory_of("p", truth), bundle, w.prover.pk);
        return;
      }
      case Adversary::replay_proof: {
        auto bundle = prove_claim(request(w, claim, w.transcript));
        dsl::Claim later = claim;
        later.interval_start += kReplayShift;
        later.interval_end += kReplayShift;
        auto truth = plan;
        for (const auto& i : plan_) truth.push_back({i.time + kReplayShift, far(i.position)});
        bundle.pub.s1 = w.clock.slot_of(later.interval_start);
        bundle.pub.s2 = w.clock.slot_of(later.interval_end);
        bundle.evidence.claim = later;
        finish(result, w, later, trajectory_of("p", truth), bundle, w.prover.pk);
        return;
      }
      case Adversary::transfer_proof: {
        auto bundle = prove_claim(request(w, claim, w.transcript));
        const Keypair eve = keygen(group_, rng_());
        dsl::Claim theirs = claim;
        theirs.prover_id = "eve";
        auto truth = plan;
        for (auto& i : truth) i.position = far(i.position);
        bundle.evidence.claim = theirs;
        bundle.evidence.prover_pk = eve.pk;
        finish(result, w, theirs, trajectory_of("eve", truth), bundle, eve.pk);
        return;
      }
      case Adversary::relay_delay: {
        for (auto& i : plan) {
          if (preset_ == "roadx") {
            i.position = rounded({i.position.x, kRoadHalfWidth + 2 * grid_.edge() + 2});
          } else {
            const double a = std::atan2(i.position.y, i.position.x);
            const double r = region_extent(w) + 2 * grid_.edge() + 2;
            i.position = rounded({r * std::cos(a), r * std::sin(a)});
          }
          i.relayed = true;
        }
        break;
      }
    }

    const Transcript transcript = attest_plan(w, plan, w.prover);
    const auto bundle = prove_unchecked(request(w, claim, transcript));
    finish(result, w, claim, trajectory_of("p", plan), bundle, w.prover.pk);
  }

  ScenarioArtifacts* out_;
  ScenarioConfig cfg_;
  std::string preset_;
  Shape shape_;
  std::mt19937_64 rng_;
  const SchnorrGroup& group_;
  grid::HexGrid grid_;
  std::size_t inside_count_ = 0;
  std::vector<Instant> plan_;
};

}  // namespace

std::string_view to_string(TrustModel t) { return name_of(kTrustNames, t); }
std::string_view to_string(Interaction i) { return name_of(kInteractionNames, i); }
std::string_view to_string(Adversary a) { return name_of(kAdversaryNames, a); }
TrustModel trust_model_from_string(std::string_view s) { return value_of(kTrustNames, s, "trust model"); }
Interaction interaction_from_string(std::string_view s) { return value_of(kInteractionNames, s, "interaction"); }
Adversary adversary_from_string(std::string_view s) {
  if (s == "forge") return Adversary::forge_signature;
  if (s == "replay") return Adversary::replay_proof;
  if (s == "transfer") return Adversary::transfer_proof;
  if (s == "relay") return Adversary::relay_delay;
  return value_of(kAdversaryNames, s, "adversary");
}

std::vector<std::string> expected_labels(Adversary a) {
  switch (a) {
    case Adversary::none: return {};
    case Adversary::teleport: return {"C5"};
    case Adversary::outside_region: return {"C3"};
    case Adversary::slot_shift: return {"C4"};
    case Adversary::forge_signature: return {"C1-native"};
    case Adversary::replay_proof:
    case Adversary::transfer_proof: return {"C7", "schnorr-binding", "statement-hash"};
    case Adversary::relay_delay: return {"C2"};
  }
  return {};
}

void ScenarioConfig::validate() const {
  canonical_preset(preset);
  if (witness_count < 1) throw ValidationError("witness_count must be at least 1");
  if (!(precision_m > 0)) throw ValidationError("precision_m must be positive");
  if (noise_m < 0 || relay_delay_m < 0) throw ValidationError("channel delays cannot be negative");
  group_by_id(group_id);
}

ScenarioConfig preset_config(std::string_view preset, Adversary adversary, std::uint64_t seed) {
  ScenarioConfig c;
  c.preset = canonical_preset(preset);
  c.adversary = adversary;
  c.rng_seed = seed;
  if (c.preset == "retail") {
    c.trust_model = TrustModel::centralized_anchor;
    c.interaction = Interaction::non_interactive;
    c.precision_m = 150;
    c.witness_count = 1;
  } else if (c.preset == "supply-chain") {
    c.trust_model = TrustModel::partially_distributed;
    c.interaction = Interaction::non_interactive;
    c.precision_m = 50;
    c.witness_count = 2;
  } else if (c.preset == "e-voting") {
    c.trust_model = TrustModel::decentralized_quorum;
    c.interaction = Interaction::interactive;
    c.precision_m = 8;
    c.witness_count = 3;
  } else {
    c.trust_model = TrustModel::partially_distributed;
    c.interaction = Interaction::non_interactive;
    c.precision_m = 60;
    c.witness_count = 80;
  }
  return c;
}

nlohmann::ordered_json to_json(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  j["preset"] = c.preset;
  j["trust_model"] = to_string(c.trust_model);
  j["interaction"] = to_string(c.interaction);
  j["precision_m"] = c.precision_m;
  j["witness_count"] = c.witness_count;
  j["adversary"] = to_string(c.adversary);
  j["rng_seed"] = c.rng_seed;
  j["group"] = c.group_id;
  j["field"] = ff::to_string(c.field);
  j["quorum"] = c.quorum;
  j["noise_m"] = c.noise_m;
  j["relay_delay_m"] = c.relay_delay_m;
  return j;
}

ScenarioConfig config_from_json(const nlohmann::json& j) {
  try {
    ScenarioConfig c = preset_config(j.value("preset", std::string("retail")),
                                     adversary_from_string(j.value("adversary", std::string("none"))),
                                     j.value("rng_seed", std::uint64_t{0}));
    if (j.contains("trust_model")) c.trust_model = trust_model_from_string(j.at("trust_model").get<std::string>());
    if (j.contains("interaction")) c.interaction = interaction_from_string(j.at("interaction").get<std::string>());
    c.precision_m = j.value("precision_m", c.precision_m);
    c.witness_count = j.value("witness_count", c.witness_count);
    c.group_id = j.value("group", c.group_id);
    if (j.contains("field")) c.field = ff::field_profile_from_string(j.at("field").get<std::string>());
    c.quorum = j.value("quorum", c.quorum);
    c.noise_m = j.value("noise_m", c.noise_m);
    c.relay_delay_m = j.value("relay_delay_m", c.relay_delay_m);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("scenario config: ") + e.what());
  }
}

World build_world(const ScenarioConfig& config) { return Generator(config).honest_world(); }

ScenarioResult run_scenario(const ScenarioConfig& config, ScenarioArtifacts* artifacts) {
  try {
    return Generator(config, artifacts).run();
  } catch (const Error& e) {
    ScenarioResult r;
    r.scenario = config.preset + "/" + std::string(to_string(config.adversary)) + "/seed=" +
                 std::to_string(config.rng_seed);
    r.failure_label = "error:" + e.kind();
    return r;
  }
}

nlohmann::ordered_json ScenarioResult::to_json() const {
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["ground_truth"] = ground_truth;
  j["verdict"] = verdict ? "accept" : "reject";
  j["failure_label"] = failure_label;
  j["samples"] = samples;
  return j;
}

std::string BatchResult::jsonl() const {
  std::string out;
  for (const auto& r : results) out += r.to_json().dump() + "\n";
  return out;
}

BatchResult run_batch(const std::vector<ScenarioConfig>& configs, std::size_t trials, unsigned workers) {
  std::vector<ScenarioConfig> jobs;
  for (const auto& c : configs)
    for (std::size_t t = 0; t < trials; ++t) {
      ScenarioConfig k = c;
      k.rng_seed = c.rng_seed + t;
      jobs.push_back(k);
    }
  BatchResult batch;
  batch.results.resize(jobs.size());
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < n; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < jobs.size(); i += n) batch.results[i] = run_scenario(jobs[i]);
    });
  for (auto& t : pool) t.join();

  std::vector<logic::Verdict> verdicts;
  for (const auto& r : batch.results) verdicts.push_back({r.scenario, r.ground_truth, r.verdict, r.failure_label});
  batch.report = logic::soundness_completeness_report(verdicts);
  return batch;
}

}  // namespace polc::scenario
