#pragma once

// Exhaustive gadget checks against native predicates, and the constraint
// count model. Each check returns how many cases it tried and how many
// disagreed; shared by the unit tests and the acceptance binary.

#include <cstdint>
#include <string>
#include <vector>

#include "polc/gadgets.hpp"
#include "polc/merkle.hpp"
#include "polc/schnorr.hpp"
#include "polc/synthesize.hpp"

namespace polc::oracle {

struct Tally {
  std::size_t cases = 0;
  std::size_t disagreements = 0;
  std::string first;  // description of the first disagreement
  void record(bool gadget, bool native, const std::string& what) {
    ++cases;
    if (gadget != native) {
      if (!disagreements) first = what + (gadget ? " gadget accepts, predicate false" : " gadget rejects, predicate true");
      ++disagreements;
    }
  }
};

template <ff::PrimeField F>
bool satisfied(const r1cs::Circuit<F>& c) {
  return r1cs::is_satisfied(c.system(), r1cs::Assignment<F>{c.values()}).ok;
}

/// range(v, lo, hi) for every v, lo, hi in 0..63 with 6 bits; plus nonneg
/// over every 6-bit witness for v in -64..127, so acceptance never depends
/// on the honest witness generator.
template <ff::PrimeField F>
Tally range_exhaustive() {
  using LC = r1cs::LinearCombination<F>;
  Tally t;
  for (std::int64_t lo = 0; lo < 64; ++lo)
    for (std::int64_t hi = 0; hi < 64; ++hi)
      for (std::int64_t v = 0; v < 64; ++v) {
        r1cs::Circuit<F> c;
        const auto vv = c.alloc(F::from_i64(v));
        gadgets::range<F>(c, vv, LC(F::from_i64(lo)), LC(F::from_i64(hi)), 6);
        t.record(satisfied(c), lo <= v && v <= hi, "range v=" + std::to_string(v));
      }
  for (std::int64_t v = -64; v < 128; ++v) {
    r1cs::Circuit<F> c;
    const auto vv = c.alloc(F::from_i64(v));
    const auto bits = gadgets::unpack<F>(c, vv, 6);
    bool any = false;
    auto values = c.values();
    for (unsigned w = 0; w < 64; ++w) {
      for (unsigned i = 0; i < 6; ++i) values[bits[i].index] = F::from_u64((w >> i) & 1U);
      any = any || r1cs::is_satisfied(c.system(), r1cs::Assignment<F>{values}).ok;
    }
    // non-boolean witnesses for one bit
    for (std::uint64_t junk : {2ULL, 3ULL}) {
      values = c.values();
      values[bits[0].index] = F::from_u64(junk);
      any = any || r1cs::is_satisfied(c.system(), r1cs::Assignment<F>{values}).ok;
    }
    t.record(any, v >= 0 && v < 64, "nonneg v=" + std::to_string(v));
  }
  return t;
}

/// Prover at (x, y), |x|, |y| <= 10, witness at one of several anchors,
/// bound db in 0..15: accepted iff (x-xw)^2 + (y-yw)^2 <= db^2.
template <ff::PrimeField F>
Tally proximity_exhaustive() {
  using LC = r1cs::LinearCombination<F>;
  Tally t;
  const std::int64_t anchors[][2] = {{0, 0}, {3, -2}, {-7, 5}};
  for (const auto& w : anchors)
    for (std::int64_t x = -10; x <= 10; ++x)
      for (std::int64_t y = -10; y <= 10; ++y)
        for (std::int64_t db = 0; db < 16; ++db) {
          r1cs::Circuit<F> c;
          const auto xp = c.alloc(F::from_i64(x));
          const auto yp = c.alloc(F::from_i64(y));
          const auto dbv = c.alloc(F::from_i64(db));
          gadgets::proximity<F>(c, xp, yp, LC(F::from_i64(w[0])), LC(F::from_i64(w[1])), dbv, 5);
          const std::int64_t dx = x - w[0], dy = y - w[1];
          t.record(satisfied(c), dx * dx + dy * dy <= db * db,
                   "proximity (" + std::to_string(x) + "," + std::to_string(y) + ") db=" + std::to_string(db));
        }
  return t;
}

/// 8-leaf tree: every committed and several uncommitted cells against every
/// honest path, with both the path's own index bits and flipped bits.
template <ff::PrimeField F>
Tally merkle_exhaustive() {
  using LC = r1cs::LinearCombination<F>;
  Tally t;
  std::vector<grid::CellId> cells;
  for (int i = 0; i < 8; ++i) cells.push_back({i - 4, (i * 3) % 5, 9});
  std::sort(cells.begin(), cells.end());
  const PoseidonMerkleHasher<F> hasher;
  const RegionCommitment com = commit(cells, hasher);
  std::vector<grid::CellId> probes = cells;
  for (const grid::CellId& c : {grid::CellId{-4, 1, 9}, grid::CellId{9, 9, 9}, grid::CellId{cells[3].q, cells[3].r, 8},
                                grid::CellId{-5, 0, 9}})
    probes.push_back(c);
  for (const auto& cell : probes)
    for (std::size_t leaf = 0; leaf < 8; ++leaf)
      for (std::uint64_t flip = 0; flip < 8; flip += 7) {
        MembershipPath path = prove_membership(com, cells[leaf]);
        path.leaf_index ^= flip;
        r1cs::Circuit<F> c;
        const auto root = c.alloc_public(F::from_bytes_be(com.root));
        const auto q = c.alloc(F::from_i64(cell.q));
        const auto r = c.alloc(F::from_i64(cell.r));
        const auto res = c.alloc(F::from_i64(cell.resolution));
        const auto vars = gadgets::alloc_path<F>(c, path);
        const auto lf = gadgets::merkle_leaf<F>(c, q, r, res);
        gadgets::merkle<F>(c, lf, vars, LC(root), com.depth);
        t.record(satisfied(c), verify_membership(com.root, cell, path, hasher),
                 "merkle cell (" + std::to_string(cell.q) + "," + std::to_string(cell.r) + ") leaf " +
                     std::to_string(leaf) + " flip " + std::to_string(flip));
      }
  return t;
}

/// Every slot sequence of length 1..5 over slots 0..7, for gap bounds 0..3.
template <ff::PrimeField F>
Tally continuity_exhaustive() {
  Tally t;
  for (std::uint64_t gap = 0; gap <= 3; ++gap)
    for (int len = 1; len <= 5; ++len) {
      std::uint64_t total = 1;
      for (int i = 0; i < len; ++i) total *= 8;
      for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<std::uint64_t> slots(len);
        std::uint64_t rest = code;
        for (auto& s : slots) {
          s = rest % 8;
          rest /= 8;
        }
        r1cs::Circuit<F> c;
        std::vector<r1cs::Var> vars;
        for (auto s : slots) vars.push_back(c.alloc(F::from_u64(s)));
        gadgets::continuity<F>(c, vars, gap);
        bool ok = true;
        for (int i = 1; i < len; ++i) ok = ok && slots[i - 1] <= slots[i] && slots[i] <= slots[i - 1] + gap;
        t.record(satisfied(c), ok, "continuity gap " + std::to_string(gap) + " code " + std::to_string(code));
      }
    }
  return t;
}

/// Every key pair, nonce commitment R and response z over the 7-element
/// group, with every (sk, k) witness: some witness satisfies the gadget iff
/// the signature verifies natively.
inline Tally schnorr_exhaustive() {
  using F = ff::Fp61;
  Tally t;
  const TestGroup7 g;
  for (std::uint64_t sk = 1; sk < 7; ++sk) {
    const Element pk = g.base_mul(TestGroup7::scalar(sk));
    for (int m = 0; m < 3; ++m) {
      const std::string text = "binding-" + std::to_string(m);
      const Bytes msg(text.begin(), text.end());
      for (std::uint64_t rexp = 0; rexp < 7; ++rexp)
        for (std::uint64_t z = 0; z < 7; ++z) {
          const Signature sig{g.base_mul(TestGroup7::scalar(rexp)), TestGroup7::scalar(z)};
          const Scalar ch = schnorr_challenge(g, sig.R, pk, msg);
          bool any = false;
          for (std::uint64_t wsk = 0; wsk < 7; ++wsk)
            for (std::uint64_t wk = 0; wk < 7; ++wk) {
              r1cs::Circuit<F> c;
              gadgets::schnorr<F>(c, pk, sig, ch, {wsk, wk});
              any = any || satisfied(c);
            }
          t.record(any, verify(g, pk, msg, sig),
                   "schnorr sk=" + std::to_string(sk) + " R=g^" + std::to_string(rexp) + " z=" + std::to_string(z));
        }
    }
  }
  return t;
}

/// Claim, depth-d commitment and m-sample transcript for shape measurements.
struct ShapeInstance {
  dsl::Claim claim;
  RegionCommitment commitment;
  Transcript transcript;
  SlotClock clock{1606824023, 12};
};

template <ff::PrimeField F>
ShapeInstance shape_instance(std::size_t m, unsigned depth) {
  ShapeInstance s;
  const std::size_t k = (std::size_t{1} << (depth - 1)) + 1;  // smallest count with this depth
  std::vector<grid::CellId> cells;
  for (std::size_t i = 0; i < k; ++i) cells.push_back({static_cast<std::int64_t>(i), 0, 9});
  s.commitment = commit(cells, PoseidonMerkleHasher<F>{}, "strip");
  s.claim.prover_id = "p";
  s.claim.region.name = "strip";
  s.claim.interval_start = s.clock.genesis + 120;
  s.claim.interval_end = s.claim.interval_start + 12 * 1000;
  s.claim.max_gap = 60;
  s.claim.min_samples = 1;
  for (std::size_t i = 0; i < m; ++i) {
    AttestationSample a;
    a.witness_id = "w" + std::to_string(i % 3);
    a.db = 7;
    a.cell = cells[i % k];
    a.slot = s.clock.slot_of(s.claim.interval_start) + 2 * i;
    s.transcript.samples.push_back(a);
  }
  return s;
}

/// Constraint count of the verifier-side system for m samples at depth d.
template <ff::PrimeField F>
std::size_t constraint_count(std::size_t m, unsigned depth) {
  const ShapeInstance s = shape_instance<F>(m, depth);
  SynthesisOptions opt;
  opt.clock = s.clock;
  opt.with_witness = false;
  return synthesize<F>(s.claim, s.commitment, s.transcript, opt).cs.size();
}

struct Fit {
  std::int64_t alpha = 0, beta = 0, gamma = 0;
  std::size_t points = 0;
  std::int64_t max_residual = 0;
};

/// Solves count = alpha m d + beta m + gamma from three grid points, then
/// measures the residual on every (m, d) in the grid.
template <ff::PrimeField F>
Fit fit_constraint_model(const std::vector<std::size_t>& ms, const std::vector<unsigned>& ds) {
  auto n = [](std::size_t m, unsigned d) { return static_cast<std::int64_t>(constraint_count<F>(m, d)); };
  Fit f;
  const auto m0 = static_cast<std::int64_t>(ms[0]), m1 = static_cast<std::int64_t>(ms[1]);
  const auto d0 = static_cast<std::int64_t>(ds[0]), d1 = static_cast<std::int64_t>(ds[1]);
  const std::int64_t slope0 = n(ms[1], ds[0]) - n(ms[0], ds[0]);  // (alpha d0 + beta)(m1 - m0)
  const std::int64_t slope1 = n(ms[1], ds[1]) - n(ms[0], ds[1]);
  f.alpha = (slope1 - slope0) / ((m1 - m0) * (d1 - d0));
  f.beta = slope0 / (m1 - m0) - f.alpha * d0;
  f.gamma = n(ms[0], ds[0]) - f.alpha * m0 * d0 - f.beta * m0;
  for (auto m : ms)
    for (auto d : ds) {
      const auto mi = static_cast<std::int64_t>(m), di = static_cast<std::int64_t>(d);
      const std::int64_t r = n(m, d) - (f.alpha * mi * di + f.beta * mi + f.gamma);
      f.max_residual = std::max(f.max_residual, r < 0 ? -r : r);
      ++f.points;
    }
  return f;
}

}  // namespace polc::oracle
