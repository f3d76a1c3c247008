#include <gtest/gtest.h>

#include <random>

#include "polc/errors.hpp"
#include "polc/hash.hpp"
#include "polc/io.hpp"
#include "polc/merkle.hpp"

namespace {

using polc::Digest;
using polc::grid::CellId;

std::vector<CellId> cells_of(std::size_t k) {
  std::vector<CellId> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back({static_cast<std::int64_t>(i) - 3, static_cast<std::int64_t>(i % 3), 9});
  return out;
}

/// Recursive top-down root over leaves padded with the last leaf.
Digest reference_root(const std::vector<CellId>& cells, const polc::MerkleHasher& h) {
  std::size_t width = 1;
  while (width < cells.size()) width *= 2;
  std::function<Digest(std::size_t, std::size_t)> node = [&](std::size_t lo, std::size_t n) -> Digest {
    if (n == 1) return h.leaf(cells[std::min(lo, cells.size() - 1)]);
    return h.node(node(lo, n / 2), node(lo + n / 2, n / 2));
  };
  return node(0, width);
}

class MerkleByHasher : public ::testing::TestWithParam<std::string> {};

TEST_P(MerkleByHasher, RootMatchesReferenceForAllSizes) {
  const auto& h = polc::hasher_by_id(GetParam());
  for (std::size_t k = 1; k <= 17; ++k) {
    const auto cells = cells_of(k);
    const auto c = polc::commit(cells, h);
    EXPECT_EQ(c.root, reference_root(cells, h)) << k;
    EXPECT_EQ(c.depth, polc::tree_depth(k));
    EXPECT_TRUE(c.root_consistent());
  }
}

TEST_P(MerkleByHasher, ExhaustiveEightLeafMembership) {
  const auto& h = polc::hasher_by_id(GetParam());
  const auto cells = cells_of(8);
  const auto c = polc::commit(cells, h);
  ASSERT_EQ(c.depth, 3U);
  for (std::size_t i = 0; i < 8; ++i) {
    const auto path = polc::prove_membership(c, cells[i]);
    EXPECT_EQ(path.leaf_index, i);
    EXPECT_TRUE(polc::verify_membership(c.root, cells[i], path, h));
    // a valid path does not open any other leaf, and any other index fails
    for (std::size_t j = 0; j < 8; ++j) {
      if (j != i) {
        EXPECT_FALSE(polc::verify_membership(c.root, cells[j], path, h));
      }
      auto moved = path;
      moved.leaf_index = j;
      EXPECT_EQ(polc::verify_membership(c.root, cells[i], moved, h), j == i);
    }
    auto tampered = path;
    tampered.siblings[i % 3][0] ^= 1;
    EXPECT_FALSE(polc::verify_membership(c.root, cells[i], tampered, h));
    tampered = path;
    tampered.leaf_index |= 8;  // out of range for depth 3
    EXPECT_FALSE(polc::verify_membership(c.root, cells[i], tampered, h));
  }
  // non-members: neighbours of committed cells, other resolutions
  for (const CellId& outside : {CellId{100, 0, 9}, CellId{-3, 1, 9}, CellId{-3, 0, 8}}) {
    EXPECT_THROW(polc::prove_membership(c, outside), polc::NotMemberError);
    for (std::size_t i = 0; i < 8; ++i)
      EXPECT_FALSE(polc::verify_membership(c.root, outside, polc::prove_membership(c, cells[i]), h));
  }
}

INSTANTIATE_TEST_SUITE_P(Hashers, MerkleByHasher, ::testing::Values("sha256", "poseidon-m61", "poseidon-bn254"));

TEST(Merkle, CommitRejectsBadInput) {
  EXPECT_THROW(polc::commit({}), polc::EmptyRegionError);
  EXPECT_THROW(polc::commit({{1, 0, 9}, {0, 0, 9}}), polc::ValidationError);
  EXPECT_THROW(polc::commit({{0, 0, 9}, {0, 0, 9}}), polc::ValidationError);
  EXPECT_THROW(polc::hasher_by_id("md5"), polc::FormatError);
}

TEST(Merkle, SingleLeafHasEmptyPath) {
  const auto c = polc::commit({{4, 2, 9}});
  EXPECT_EQ(c.depth, 0U);
  const auto path = polc::prove_membership(c, {4, 2, 9});
  EXPECT_TRUE(path.siblings.empty());
  EXPECT_EQ(c.root, polc::default_hasher().leaf({4, 2, 9}));
}

TEST(Merkle, Sha256LeafEncoding) {
  const auto bytes = polc::leaf_encode({-1, 2, 9});
  ASSERT_EQ(bytes.size(), 18U);
  EXPECT_EQ(polc::to_hex(bytes), "00ffffffffffffffff000000000000000209");
  EXPECT_EQ(polc::Sha256MerkleHasher().leaf({-1, 2, 9}), polc::sha256(bytes));
}

TEST(Merkle, TreeDepth) {
  EXPECT_EQ(polc::tree_depth(1), 0U);
  EXPECT_EQ(polc::tree_depth(2), 1U);
  EXPECT_EQ(polc::tree_depth(5), 3U);
  EXPECT_EQ(polc::tree_depth(8), 3U);
  EXPECT_EQ(polc::tree_depth(9), 4U);
}

TEST(Merkle, CommitmentJsonRoundTrip) {
  const auto c = polc::commit(cells_of(11), polc::hasher_by_id("poseidon-m61"), "plaza");
  const auto j = polc::io::to_json(c);
  const auto back = polc::io::commitment_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.cells, c.cells);
  EXPECT_EQ(back.root, c.root);
  EXPECT_EQ(back.name, "plaza");
  EXPECT_EQ(polc::prove_membership(back, c.cells[7]), polc::prove_membership(c, c.cells[7]));
  auto bad = nlohmann::json::parse(j.dump());
  bad["cells"][0][0] = 99;
  EXPECT_THROW(polc::io::commitment_from_json(bad), polc::ValidationError);
  bad = nlohmann::json::parse(j.dump());
  bad["cells"][0] = "x";
  EXPECT_THROW(polc::io::commitment_from_json(bad), polc::FormatError);
}

TEST(Merkle, RootDependsOnEveryCell) {
  std::mt19937_64 rng(2);
  auto cells = cells_of(13);
  const auto root = polc::commit(cells).root;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto changed = cells;
    changed[i].resolution = 8;
    std::sort(changed.begin(), changed.end());
    EXPECT_NE(polc::commit(changed).root, root) << i;
  }
}

}  // namespace
