#pragma once

// JSON file formats shared by the CLI and proof bundles.
//
//   region      {name, frame: "local"|"lonlat", ref_latitude?, vertices: [[x,y],...]}
//   commitment  {name, root_hex, resolution, hash_id, depth, k, cells: [[q,r],...]}
//   transcript  {prover_pk_hex, group, samples: [{witness_id, sig_hex, db, cell: [q,r,res], slot,
//                prover_position?: [x,y]}]}
//   registry    {group, witnesses: [{witness_id, pk_hex, position: [x,y], cell: [q,r,res]}]}
//   key         {group, sk_hex, pk_hex}
//
// Readers throw FormatError on malformed input.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "polc/attestation.hpp"
#include "polc/grid.hpp"
#include "polc/merkle.hpp"

namespace polc::io {

using ojson = nlohmann::ordered_json;

struct RegionFile {
  std::string name;
  grid::Ring vertices;  // local metres after projection
};

RegionFile region_from_json(const nlohmann::json& j);
ojson to_json(const RegionFile& region);

ojson cell_json(const grid::CellId& c);
grid::CellId cell_from_json(const nlohmann::json& j, int default_resolution = grid::kDefaultResolution);

ojson to_json(const RegionCommitment& c);
/// Recomputes the tree; throws FormatError if the stored root does not match.
RegionCommitment commitment_from_json(const nlohmann::json& j);

ojson to_json(const AttestationSample& s, bool include_private);
AttestationSample sample_from_json(const nlohmann::json& j);

ojson to_json(const Transcript& t, std::string_view group_id, bool include_private = true);
Transcript transcript_from_json(const nlohmann::json& j);

ojson to_json(const WitnessRegistry& r, std::string_view group_id);
WitnessRegistry registry_from_json(const nlohmann::json& j);

ojson key_json(const Keypair& kp, std::string_view group_id);
Keypair key_from_json(const nlohmann::json& j);

Element element_from_hex(std::string_view hex);
Scalar scalar_from_hex(std::string_view hex);

nlohmann::json read_json(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const ojson& j);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace polc::io
