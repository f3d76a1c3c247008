#include "polc/io.hpp"

#include <fstream>
#include <sstream>

#include "polc/errors.hpp"

namespace polc::io {

namespace {

template <class Fn>
auto guarded(std::string_view what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

template <std::size_t N>
std::array<std::uint8_t, N> fixed_from_hex(std::string_view hex, std::string_view what) {
  const Bytes b = from_hex(hex);
  if (b.size() != N) throw FormatError(std::string(what) + " must be " + std::to_string(N) + " bytes");
  std::array<std::uint8_t, N> out;
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

grid::Point point_from(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

Element element_from_hex(std::string_view hex) { return fixed_from_hex<32>(hex, "group element"); }
Scalar scalar_from_hex(std::string_view hex) { return fixed_from_hex<32>(hex, "scalar"); }

RegionFile region_from_json(const nlohmann::json& j) {
  return guarded("region", [&] {
    RegionFile r;
    r.name = j.value("name", std::string("region"));
    const std::string frame = j.value("frame", std::string("local"));
    std::optional<grid::LocalProjection> projection;
    if (frame == "lonlat") {
      projection = grid::LocalProjection{j.at("ref_latitude").get<double>()};
    } else if (frame != "local") {
      throw FormatError("region frame must be 'local' or 'lonlat'");
    }
    for (const auto& v : j.at("vertices")) {
      const grid::Point p = point_from(v);
      r.vertices.push_back(projection ? projection->project(p.x, p.y) : p);
    }
    return r;
  });
}

ojson to_json(const RegionFile& region) {
  ojson v = ojson::array();
  for (const auto& p : region.vertices) v.push_back({p.x, p.y});
  return {{"name", region.name}, {"frame", "local"}, {"vertices", v}};
}

ojson cell_json(const grid::CellId& c) { return {c.q, c.r, c.resolution}; }

grid::CellId cell_from_json(const nlohmann::json& j, int default_resolution) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3) throw FormatError("cell must be [q, r] or [q, r, resolution]");
  return {j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>(),
          j.size() == 3 ? j.at(2).get<int>() : default_resolution};
}

ojson to_json(const RegionCommitment& c) {
  ojson cells = ojson::array();
  for (const auto& cell : c.cells) cells.push_back({cell.q, cell.r});
  ojson j;
  j["name"] = c.name;
  j["root_hex"] = to_hex(c.root);
  j["resolution"] = c.cells.empty() ? grid::kDefaultResolution : c.cells.front().resolution;
  j["hash_id"] = c.hash_id;
  j["depth"] = c.depth;
  j["k"] = c.cells.size();
  j["cells"] = cells;
  return j;
}

RegionCommitment commitment_from_json(const nlohmann::json& j) {
  return guarded("commitment", [&] {
    const int res = j.at("resolution").get<int>();
    std::vector<grid::CellId> cells;
    for (const auto& c : j.at("cells")) cells.push_back(cell_from_json(c, res));
    const auto& hasher = hasher_by_id(j.at("hash_id").get<std::string>());
    RegionCommitment c = commit(std::move(cells), hasher, j.value("name", std::string()));
    if (to_hex(c.root) != j.at("root_hex").get<std::string>())
      throw FormatError("commitment root does not match its cell list");
    return c;
  });
}

ojson to_json(const AttestationSample& s, bool include_private) {
  ojson j;
  j["witness_id"] = s.witness_id;
  j["sig_hex"] = to_hex(s.sig.to_bytes());
  j["db"] = s.db;
  j["cell"] = cell_json(s.cell);
  j["slot"] = s.slot;
  if (include_private && s.prover_position) j["prover_position"] = {s.prover_position->x, s.prover_position->y};
  return j;
}

AttestationSample sample_from_json(const nlohmann::json& j) {
  return guarded("sample", [&] {
    AttestationSample s;
    s.witness_id = j.at("witness_id").get<std::string>();
    s.sig = Signature::from_bytes(from_hex(j.at("sig_hex").get<std::string>()));
    s.db = j.at("db").get<std::uint64_t>();
    s.cell = cell_from_json(j.at("cell"));
    s.slot = j.at("slot").get<std::uint64_t>();
    if (j.contains("prover_position")) s.prover_position = point_from(j.at("prover_position"));
    return s;
  });
}

ojson to_json(const Transcript& t, std::string_view group_id, bool include_private) {
  ojson samples = ojson::array();
  for (const auto& s : t.samples) samples.push_back(to_json(s, include_private));
  return {{"prover_pk_hex", to_hex(t.prover_pk)}, {"group", group_id}, {"samples", samples}};
}

Transcript transcript_from_json(const nlohmann::json& j) {
  return guarded("transcript", [&] {
    std::vector<AttestationSample> samples;
    for (const auto& s : j.at("samples")) samples.push_back(sample_from_json(s));
    return Transcript::make(element_from_hex(j.at("prover_pk_hex").get<std::string>()), std::move(samples));
  });
}

ojson to_json(const WitnessRegistry& r, std::string_view group_id) {
  ojson ws = ojson::array();
  for (const auto& [id, w] : r.records())
    ws.push_back({{"witness_id", id},
                  {"pk_hex", to_hex(w.pk)},
                  {"position", {w.position.x, w.position.y}},
                  {"cell", cell_json(w.cell)}});
  return {{"group", group_id}, {"witnesses", ws}};
}

WitnessRegistry registry_from_json(const nlohmann::json& j) {
  return guarded("registry", [&] {
    WitnessRegistry r;
    for (const auto& w : j.at("witnesses"))
      r.add(WitnessRecord{w.at("witness_id").get<std::string>(), element_from_hex(w.at("pk_hex").get<std::string>()),
                          point_from(w.at("position")), cell_from_json(w.at("cell"))});
    return r;
  });
}

ojson key_json(const Keypair& kp, std::string_view group_id) {
  return {{"group", group_id}, {"sk_hex", to_hex(kp.sk)}, {"pk_hex", to_hex(kp.pk)}};
}

Keypair key_from_json(const nlohmann::json& j) {
  return guarded("key", [&] {
    Keypair kp;
    kp.sk = scalar_from_hex(j.at("sk_hex").get<std::string>());
    kp.pk = element_from_hex(j.at("pk_hex").get<std::string>());
    const auto& group = group_by_id(j.value("group", std::string("ristretto255")));
    if (group.base_mul(kp.sk) != kp.pk) throw FormatError("key file: pk does not match sk");
    return kp;
  });
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw FormatError("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const ojson& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace polc::io
