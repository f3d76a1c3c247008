#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "polc/bytes.hpp"
#include "polc/field.hpp"
#include "polc/grid.hpp"
#include "polc/poseidon.hpp"

namespace polc {

/// Two-to-one hash used to commit cell lists.
class MerkleHasher {
 public:
  virtual ~MerkleHasher() = default;
  virtual std::string_view id() const = 0;
  virtual Digest leaf(const grid::CellId& cell) const = 0;
  virtual Digest node(const Digest& left, const Digest& right) const = 0;
};

/// Field-native hasher; digests are canonical big-endian field elements.
/// leaf = H_leaf(q, r, resolution), node = H_node(left, right).
template <ff::PrimeField F>
class PoseidonMerkleHasher final : public MerkleHasher {
 public:
  std::string_view id() const override { return id_; }
  Digest leaf(const grid::CellId& cell) const override {
    return leaf_element(cell).to_bytes_be();
  }
  Digest node(const Digest& left, const Digest& right) const override {
    return poseidon_hash<F>(HashDomain::merkle_node, {F::from_bytes_be(left), F::from_bytes_be(right)})
        .to_bytes_be();
  }
  static F leaf_element(const grid::CellId& cell) {
    return poseidon_hash<F>(HashDomain::merkle_leaf,
                            {F::from_i64(cell.q), F::from_i64(cell.r), F::from_i64(cell.resolution)});
  }

 private:
  std::string id_ = "poseidon-" + std::string(F::kName);
};

/// Byte-oriented hasher for use outside circuits.
/// leaf = SHA256(0x00 || q || r || resolution), node = SHA256(0x01 || l || r).
class Sha256MerkleHasher final : public MerkleHasher {
 public:
  std::string_view id() const override { return "sha256"; }
  Digest leaf(const grid::CellId& cell) const override;
  Digest node(const Digest& left, const Digest& right) const override;
};

/// Canonical leaf bytes: 0x00 || q (i64 BE) || r (i64 BE) || resolution (u8).
Bytes leaf_encode(const grid::CellId& cell);

const MerkleHasher& hasher_by_id(std::string_view id);  // throws FormatError
const MerkleHasher& default_hasher();                    // poseidon-bn254

/// ceil(log2(k)) for k >= 1.
unsigned tree_depth(std::size_t leaves);

struct RegionCommitment {
  std::vector<grid::CellId> cells;  // strictly sorted
  Digest root{};
  unsigned depth = 0;
  std::string hash_id;
  std::string name;  // region name, informational
  /// Hash levels, leaves first; filled by commit().
  std::shared_ptr<const std::vector<std::vector<Digest>>> tree;

  std::size_t size() const { return cells.size(); }
  /// Recomputes the root from `cells` and compares with `root`.
  bool root_consistent() const;
};

struct MembershipPath {
  std::uint64_t leaf_index = 0;
  std::vector<Digest> siblings;  // leaf level first
  bool operator==(const MembershipPath&) const = default;
};

/// Binary Merkle tree over the sorted cells; leaves are padded to a power of
/// two by repeating the last leaf. Throws EmptyRegionError for no cells and
/// ValidationError for unsorted or duplicate cells.
RegionCommitment commit(std::vector<grid::CellId> cells, const MerkleHasher& hasher = default_hasher(),
                        std::string name = {});

/// Throws NotMemberError if `cell` is not committed.
MembershipPath prove_membership(const RegionCommitment& commitment, const grid::CellId& cell);

bool verify_membership(const Digest& root, const grid::CellId& cell, const MembershipPath& path,
                       const MerkleHasher& hasher);

/// Root computed from an explicit leaf digest and path.
Digest root_from_path(const Digest& leaf, const MembershipPath& path, const MerkleHasher& hasher);

}  // namespace polc
