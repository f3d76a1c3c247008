#pragma once

// Constraint gadgets for the location-proof circuit.
//
// Every gadget takes its operands as linear combinations, emits constraints
// into a Circuit and, in the same pass, fills in the auxiliary witness values
// from the operands' current values. The shape of what is emitted depends
// only on the gadget parameters, never on the values.

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "polc/errors.hpp"
#include "polc/merkle.hpp"
#include "polc/poseidon.hpp"
#include "polc/r1cs.hpp"
#include "polc/schnorr.hpp"

namespace polc::gadgets {

using r1cs::Circuit;
using r1cs::LinearCombination;
using r1cs::Var;

/// Range proofs decompose values into `bits` booleans; sums of two such
/// values must stay below p.
template <ff::PrimeField F>
void check_capacity(unsigned bits) {
  if (bits + 2 > F::kBits)
    throw CapacityError(std::to_string(bits) + "-bit range exceeds the capacity of field " +
                        std::string(F::kName));
}

template <ff::PrimeField F>
Var boolean(Circuit<F>& c, bool value) {
  const Var b = c.alloc(value ? F::one() : F::zero());
  c.enforce(b, LinearCombination<F>(F::one()) - b, LinearCombination<F>());
  return b;
}

/// Booleans b_0..b_{bits-1} with sum b_i 2^i = v.
template <ff::PrimeField F>
std::vector<Var> unpack(Circuit<F>& c, const LinearCombination<F>& v, unsigned bits) {
  const F value = c.value(v);
  std::vector<Var> out;
  out.reserve(bits);
  LinearCombination<F> packed;
  F weight = F::one();
  for (unsigned i = 0; i < bits; ++i) {
    out.push_back(boolean(c, value.bit(i)));
    packed += LinearCombination<F>(out.back()) * weight;
    weight = weight + weight;
  }
  c.enforce_equal(packed, v);
  return out;
}

/// 0 <= v < 2^bits.
template <ff::PrimeField F>
void nonneg(Circuit<F>& c, const LinearCombination<F>& v, unsigned bits) {
  check_capacity<F>(bits);
  unpack(c, v, bits);
}

/// lo <= v <= hi, given hi - lo < 2^bits.
template <ff::PrimeField F>
void range(Circuit<F>& c, const LinearCombination<F>& v, const LinearCombination<F>& lo,
           const LinearCombination<F>& hi, unsigned bits) {
  nonneg(c, v - lo, bits);
  nonneg(c, hi - v, bits);
}

/// (xp - xw)^2 + (yp - yw)^2 <= db^2 for integer coordinates, with
/// 0 <= db < 2^bits. The per-axis bounds |dx|, |dy| <= db keep every square
/// far below p so the final comparison cannot wrap.
template <ff::PrimeField F>
void proximity(Circuit<F>& c, const LinearCombination<F>& xp, const LinearCombination<F>& yp,
               const LinearCombination<F>& xw, const LinearCombination<F>& yw,
               const LinearCombination<F>& db, unsigned bits) {
  if (2 * bits + 3 > F::kBits)
    throw CapacityError("squared distances of " + std::to_string(bits) + "-bit values exceed p/4");
  const auto dx = xp - xw;
  const auto dy = yp - yw;
  nonneg(c, db, bits);
  range(c, dx, -db, db, bits + 1);
  range(c, dy, -db, db, bits + 1);
  const auto dx2 = c.mul(dx, dx);
  const auto dy2 = c.mul(dy, dy);
  const auto db2 = c.mul(db, db);
  nonneg(c, db2 - dx2 - dy2, 2 * bits + 1);
}

// ---- Poseidon ------------------------------------------------------------------

/// State combinations with more terms than this are replaced by a variable.
inline constexpr std::size_t kMaterializeTerms = 3;

template <ff::PrimeField F>
LinearCombination<F> sbox(Circuit<F>& c, const LinearCombination<F>& x) {
  if (x.is_constant()) return LinearCombination<F>(polc::sbox(x.constant_term()));
  constexpr unsigned alpha = F::kSboxDegree;
  if (!c.with_witness()) {
    LinearCombination<F> acc = x;
    for (int i = std::bit_width(alpha) - 2; i >= 0; --i) {
      acc = c.mul_known(acc, acc, F::zero());
      if ((alpha >> i) & 1U) acc = c.mul_known(acc, x, F::zero());
    }
    return acc;
  }
  const F xv = c.value(x);
  LinearCombination<F> acc = x;
  F accv = xv;
  for (int i = std::bit_width(alpha) - 2; i >= 0; --i) {
    acc = c.mul_known(acc, acc, accv * accv);
    accv = accv * accv;
    if ((alpha >> i) & 1U) {
      acc = c.mul_known(acc, x, accv * xv);
      accv = accv * xv;
    }
  }
  return acc;
}

template <ff::PrimeField F>
void poseidon_permute(Circuit<F>& c, std::array<LinearCombination<F>, 3>& state) {
  using P = PoseidonParams<F>;
  const auto& params = P::instance();
  for (std::size_t round = 0; round < P::kRounds; ++round) {
    for (std::size_t i = 0; i < 3; ++i) state[i].add_constant(params.round_constants[round][i]);
    const bool full = P::is_full_round(round);
    if (full) {
      for (auto& s : state) s = sbox(c, s);
    } else {
      state[0] = sbox(c, state[0]);
    }
    polc::linear_layer(state, full);
    for (auto& s : state)
      if (s.terms().size() > kMaterializeTerms) s = c.materialize(s);
  }
}

template <ff::PrimeField F>
LinearCombination<F> poseidon_hash(Circuit<F>& c, HashDomain domain,
                                   std::span<const LinearCombination<F>> inputs) {
  std::array<LinearCombination<F>, 3> state{
      LinearCombination<F>(sponge_capacity<F>(domain, inputs.size())), {}, {}};
  std::size_t i = 0;
  do {
    for (std::size_t k = 0; k < 2; ++k, ++i)
      if (i < inputs.size()) state[1 + k] += inputs[i];
    poseidon_permute(c, state);
  } while (i < inputs.size());
  return c.materialize(state[1]);
}

template <ff::PrimeField F>
LinearCombination<F> poseidon_hash(Circuit<F>& c, HashDomain domain,
                                   std::initializer_list<LinearCombination<F>> inputs) {
  return poseidon_hash(c, domain, std::span<const LinearCombination<F>>(inputs.begin(), inputs.size()));
}

// ---- Merkle membership ----------------------------------------------------------

template <ff::PrimeField F>
struct MerklePathVars {
  std::vector<Var> direction;  // bit i of the leaf index
  std::vector<Var> siblings;   // leaf level first
};

template <ff::PrimeField F>
MerklePathVars<F> alloc_path(Circuit<F>& c, const MembershipPath& path) {
  MerklePathVars<F> vars;
  for (std::size_t d = 0; d < path.siblings.size(); ++d) {
    vars.direction.push_back(boolean(c, (path.leaf_index >> d) & 1U));
    vars.siblings.push_back(c.alloc(F::from_bytes_be(path.siblings[d])));
  }
  return vars;
}

template <ff::PrimeField F>
LinearCombination<F> merkle_leaf(Circuit<F>& c, const LinearCombination<F>& q,
                                 const LinearCombination<F>& r, const LinearCombination<F>& res) {
  return poseidon_hash(c, HashDomain::merkle_leaf, {q, r, res});
}

/// Hash chain from `leaf` along `path`, constrained to equal `root`.
template <ff::PrimeField F>
void merkle(Circuit<F>& c, const LinearCombination<F>& leaf, const MerklePathVars<F>& path,
            const LinearCombination<F>& root, unsigned depth) {
  if (path.siblings.size() != depth || path.direction.size() != depth)
    throw DepthMismatchError("path has " + std::to_string(path.siblings.size()) +
                             " levels, commitment depth is " + std::to_string(depth));
  LinearCombination<F> cur = leaf;
  for (unsigned d = 0; d < depth; ++d) {
    const LinearCombination<F> sib(path.siblings[d]);
    // b = 0: (cur, sib); b = 1: (sib, cur)
    const auto swap = c.mul(LinearCombination<F>(path.direction[d]), sib - cur);
    cur = poseidon_hash(c, HashDomain::merkle_node, {cur + swap, sib - swap});
  }
  c.enforce_equal(cur, root);
}

// ---- sample binding -----------------------------------------------------------

/// Field image of a witness identifier: first 8 bytes of SHA-256(id), reduced.
template <ff::PrimeField F>
F witness_tag(const std::string& witness_id) {
  const Digest d = sha256(witness_id);
  return F::from_bytes_be(std::span<const std::uint8_t>(d.data(), 8));
}

/// Native value of the binding hash over a signed sample tuple.
template <ff::PrimeField F>
F binding_value(std::uint64_t db, const grid::CellId& cell, std::uint64_t slot, const F& wid) {
  return polc::poseidon_hash<F>(HashDomain::sample_binding,
                                {F::from_u64(db), F::from_i64(cell.q), F::from_i64(cell.r),
                                 F::from_i64(cell.resolution), F::from_u64(slot), wid});
}

/// In-circuit hash of (db, q, r, resolution, slot, witness tag) equal to the
/// natively verified `expected`.
template <ff::PrimeField F>
void signature_binding(Circuit<F>& c, const std::array<LinearCombination<F>, 6>& fields, const F& expected) {
  const auto h = poseidon_hash(c, HashDomain::sample_binding,
                               std::span<const LinearCombination<F>>(fields.data(), fields.size()));
  c.enforce_equal(h, LinearCombination<F>(expected));
}

// ---- coverage and continuity --------------------------------------------------

/// count = m and count >= m_min.
template <ff::PrimeField F>
void coverage(Circuit<F>& c, std::uint64_t m, std::uint64_t m_min) {
  const Var count = c.alloc(F::from_u64(m));
  c.enforce_equal(count, LinearCombination<F>(F::from_u64(m)));
  nonneg(c, LinearCombination<F>(count) - LinearCombination<F>(F::from_u64(m_min)), 32);
}

inline unsigned gap_bits(std::uint64_t max_gap) {
  return std::max(1U, static_cast<unsigned>(std::bit_width(max_gap)));
}

/// prev <= next <= prev + max_gap.
template <ff::PrimeField F>
void continuity_step(Circuit<F>& c, const LinearCombination<F>& prev, const LinearCombination<F>& next,
                     std::uint64_t max_gap) {
  range(c, next, prev, prev + LinearCombination<F>(F::from_u64(max_gap)), gap_bits(max_gap));
}

template <ff::PrimeField F>
void continuity(Circuit<F>& c, std::span<const Var> slots, std::uint64_t max_gap) {
  for (std::size_t i = 1; i < slots.size(); ++i) continuity_step<F>(c, slots[i - 1], slots[i], max_gap);
}

// ---- Schnorr over the order-7 test group ----------------------------------------

/// g^e for e = sum b_i 2^i, as prod_i (1 + b_i (g^(2^i) - 1)).
template <ff::PrimeField F>
LinearCombination<F> exp_bits(Circuit<F>& c, const F& g, std::span<const Var> bits) {
  LinearCombination<F> acc(F::one());
  F power = g;
  for (const Var& b : bits) {
    const auto factor = LinearCombination<F>(F::one()) + LinearCombination<F>(b) * (power - F::one());
    acc = c.mul(acc, factor);
    power = power * power;
  }
  return acc;
}

struct SchnorrWitness {
  std::uint64_t sk = 0;
  std::uint64_t nonce = 0;
};

/// Knowledge of sk with g^sk = pk, nonce k with g^k = R, and z = k + c sk
/// (mod 7). pk, R, c, z are circuit constants derived from public data.
/// Only the m61 field hosts the test group; other fields raise GroupProfileError.
template <ff::PrimeField F>
void schnorr(Circuit<F>& c, const Element& pk, const Signature& sig, const Scalar& challenge,
             const SchnorrWitness& w) {
  if constexpr (!std::is_same_v<F, ff::Fp61>) {
    (void)c, (void)pk, (void)sig, (void)challenge, (void)w;
    throw GroupProfileError("in-circuit Schnorr needs the m61 field with the test7 group");
  } else {
    constexpr std::uint64_t q = TestGroup7::kOrder;
    const F g = F::from_u64(TestGroup7::kGenerator);
    const std::uint64_t cv = TestGroup7::value(challenge);
    const std::uint64_t zv = sig.z[0];

    const Var sk = c.alloc(F::from_u64(w.sk));
    const auto sk_bits = unpack<F>(c, sk, 3);
    nonneg<F>(c, LinearCombination<F>(F::from_u64(q - 1)) - sk, 3);
    c.enforce_equal(exp_bits<F>(c, g, sk_bits), F::from_u64(TestGroup7::element_value(pk)));

    const Var k = c.alloc(F::from_u64(w.nonce));
    const auto k_bits = unpack<F>(c, k, 3);
    nonneg<F>(c, LinearCombination<F>(F::from_u64(q - 1)) - k, 3);
    c.enforce_equal(exp_bits<F>(c, g, k_bits), F::from_u64(TestGroup7::element_value(sig.R)));

    // k + c sk = z + q t with 0 <= t < 8
    const std::uint64_t t_value = (w.nonce + cv * w.sk) / q;
    const Var t = c.alloc(F::from_u64(t_value));
    nonneg<F>(c, t, 3);
    c.enforce_equal(LinearCombination<F>(k) + LinearCombination<F>(sk) * F::from_u64(cv),
                    LinearCombination<F>(F::from_u64(zv)) + LinearCombination<F>(t) * F::from_u64(q));
  }
}

}  // namespace polc::gadgets
