#include "polc/merkle.hpp"

#include <algorithm>
#include <bit>

#include "polc/errors.hpp"
#include "polc/hash.hpp"

namespace polc {

Bytes leaf_encode(const grid::CellId& cell) {
  ByteWriter w;
  w.u8(0x00);
  w.i64(cell.q);
  w.i64(cell.r);
  w.u8(static_cast<std::uint8_t>(cell.resolution));
  return std::move(w).bytes();
}

Digest Sha256MerkleHasher::leaf(const grid::CellId& cell) const { return sha256(leaf_encode(cell)); }

Digest Sha256MerkleHasher::node(const Digest& left, const Digest& right) const {
  std::array<std::uint8_t, 65> buf;
  buf[0] = 0x01;
  std::copy(left.begin(), left.end(), buf.begin() + 1);
  std::copy(right.begin(), right.end(), buf.begin() + 33);
  return sha256(buf);
}

const MerkleHasher& hasher_by_id(std::string_view id) {
  static const PoseidonMerkleHasher<ff::Fp61> m61;
  static const PoseidonMerkleHasher<ff::Fp254> bn254;
  static const Sha256MerkleHasher sha;
  if (id == m61.id()) return m61;
  if (id == bn254.id()) return bn254;
  if (id == sha.id()) return sha;
  throw FormatError("unknown hash id '" + std::string(id) + "'");
}

const MerkleHasher& default_hasher() { return hasher_by_id("poseidon-bn254"); }

unsigned tree_depth(std::size_t leaves) {
  if (leaves <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(leaves - 1));
}

namespace {

std::vector<std::vector<Digest>> build_levels(const std::vector<grid::CellId>& cells,
                                              const MerkleHasher& hasher) {
  const unsigned depth = tree_depth(cells.size());
  std::vector<Digest> level;
  level.reserve(std::size_t{1} << depth);
  for (const auto& c : cells) level.push_back(hasher.leaf(c));
  while (level.size() < (std::size_t{1} << depth)) level.push_back(level.back());
  std::vector<std::vector<Digest>> levels;
  levels.push_back(level);
  while (levels.back().size() > 1) {
    const auto& prev = levels.back();
    std::vector<Digest> next(prev.size() / 2);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = hasher.node(prev[2 * i], prev[2 * i + 1]);
    levels.push_back(std::move(next));
  }
  return levels;
}

}  // namespace

bool RegionCommitment::root_consistent() const {
  if (cells.empty()) return false;
  const auto& hasher = hasher_by_id(hash_id);
  return tree_depth(cells.size()) == depth && build_levels(cells, hasher).back().front() == root;
}

RegionCommitment commit(std::vector<grid::CellId> cells, const MerkleHasher& hasher,
                        std::string name) {
  if (cells.empty()) throw EmptyRegionError("cannot commit an empty cell list");
  for (std::size_t i = 1; i < cells.size(); ++i)
    if (!(cells[i - 1] < cells[i])) throw ValidationError("cells must be strictly sorted");
  RegionCommitment c;
  c.depth = tree_depth(cells.size());
  auto levels = std::make_shared<const std::vector<std::vector<Digest>>>(build_levels(cells, hasher));
  c.root = levels->back().front();
  c.tree = std::move(levels);
  c.cells = std::move(cells);
  c.hash_id = std::string(hasher.id());
  c.name = std::move(name);
  return c;
}

MembershipPath prove_membership(const RegionCommitment& commitment, const grid::CellId& cell) {
  auto it = std::lower_bound(commitment.cells.begin(), commitment.cells.end(), cell);
  if (it == commitment.cells.end() || *it != cell)
    throw NotMemberError("cell is not in the committed region");
  std::vector<std::vector<Digest>> rebuilt;
  if (!commitment.tree) rebuilt = build_levels(commitment.cells, hasher_by_id(commitment.hash_id));
  const auto& levels = commitment.tree ? *commitment.tree : rebuilt;
  MembershipPath path;
  path.leaf_index = static_cast<std::uint64_t>(it - commitment.cells.begin());
  std::uint64_t idx = path.leaf_index;
  for (unsigned d = 0; d < commitment.depth; ++d) {
    path.siblings.push_back(levels[d][idx ^ 1]);
    idx >>= 1;
  }
  return path;
}

Digest root_from_path(const Digest& leaf, const MembershipPath& path, const MerkleHasher& hasher) {
  Digest cur = leaf;
  std::uint64_t idx = path.leaf_index;
  for (const Digest& sib : path.siblings) {
    cur = (idx & 1) ? hasher.node(sib, cur) : hasher.node(cur, sib);
    idx >>= 1;
  }
  return cur;
}

bool verify_membership(const Digest& root, const grid::CellId& cell, const MembershipPath& path,
                       const MerkleHasher& hasher) {
  if (path.siblings.size() < 64 && (path.leaf_index >> path.siblings.size()) != 0) return false;
  return root_from_path(hasher.leaf(cell), path, hasher) == root;
}

}  // namespace polc
