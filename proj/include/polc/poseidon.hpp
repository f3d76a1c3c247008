#pragma once

// Field-native sponge hash (Poseidon-style HADES permutation, width 3).
//
// Round constants are derived from SHA-256 in counter mode. The linear layer
// uses addition only: full rounds multiply by circ(2, 1, 1), partial rounds by
// [[2,1,1],[1,2,1],[1,1,3]]. Parameters are fixed for this project and are not
// interoperable with any published Poseidon instance.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polc/field.hpp"
#include "polc/hash.hpp"

namespace polc {

/// Domain separation tags placed in the sponge capacity element.
enum class HashDomain : std::uint64_t {
  generic = 0,
  merkle_leaf = 1,
  merkle_node = 2,
  sample_binding = 3,
};

template <ff::PrimeField F>
struct PoseidonParams {
  static constexpr std::size_t kWidth = 3;
  static constexpr std::size_t kRate = 2;
  static constexpr std::size_t kFullRounds = 8;
  static constexpr std::size_t kPartialRounds = 56;
  static constexpr std::size_t kRounds = kFullRounds + kPartialRounds;

  std::vector<std::array<F, kWidth>> round_constants;  // one row per round

  static bool is_full_round(std::size_t round) {
    return round < kFullRounds / 2 || round >= kFullRounds / 2 + kPartialRounds;
  }

  static const PoseidonParams& instance() {
    static const PoseidonParams params = make();
    return params;
  }

 private:
  static PoseidonParams make() {
    PoseidonParams p;
    p.round_constants.resize(kRounds);
    std::uint32_t counter = 0;
    const std::string tag = "polc/poseidon/v1/" + std::string(F::kName) + "/";
    for (auto& row : p.round_constants) {
      for (auto& c : row) {
        Sha256 h;
        h.update(tag);
        const std::uint8_t ctr[4] = {static_cast<std::uint8_t>(counter >> 24),
                                     static_cast<std::uint8_t>(counter >> 16),
                                     static_cast<std::uint8_t>(counter >> 8),
                                     static_cast<std::uint8_t>(counter)};
        h.update(std::span<const std::uint8_t>(ctr, 4));
        c = F::from_bytes_be(h.finish());
        ++counter;
      }
    }
    return p;
  }
};

/// Linear layer over anything with `+`: field elements or circuit expressions.
template <class T>
void linear_layer(std::array<T, 3>& s, bool full_round) {
  const T sum = s[0] + s[1] + s[2];
  s[0] = s[0] + sum;
  s[1] = s[1] + sum;
  s[2] = full_round ? s[2] + sum : s[2] + s[2] + sum;
}

template <ff::PrimeField F>
F sbox(const F& x) {
  if constexpr (F::kSboxDegree == 5) {
    const F x2 = x * x;
    return x2 * x2 * x;
  } else if constexpr (F::kSboxDegree == 3) {
    return x * x * x;
  } else {
    return x.pow(F::kSboxDegree);
  }
}

template <ff::PrimeField F>
void poseidon_permute(std::array<F, 3>& state) {
  using P = PoseidonParams<F>;
  const auto& params = P::instance();
  for (std::size_t round = 0; round < P::kRounds; ++round) {
    for (std::size_t i = 0; i < 3; ++i) state[i] += params.round_constants[round][i];
    const bool full = P::is_full_round(round);
    if (full) {
      for (auto& s : state) s = sbox(s);
    } else {
      state[0] = sbox(state[0]);
    }
    linear_layer(state, full);
  }
}

/// Capacity element: (domain << 32) | input length.
template <ff::PrimeField F>
F sponge_capacity(HashDomain domain, std::size_t len) {
  return F::from_u64((static_cast<std::uint64_t>(domain) << 32) | static_cast<std::uint32_t>(len));
}

/// Sponge over `inputs` (rate 2, zero padding, at least one permutation).
template <ff::PrimeField F>
F poseidon_hash(HashDomain domain, std::span<const F> inputs) {
  std::array<F, 3> state{sponge_capacity<F>(domain, inputs.size()), F::zero(), F::zero()};
  std::size_t i = 0;
  do {
    for (std::size_t k = 0; k < 2; ++k, ++i)
      if (i < inputs.size()) state[1 + k] += inputs[i];
    poseidon_permute(state);
  } while (i < inputs.size());
  return state[1];
}

template <ff::PrimeField F>
F poseidon_hash(HashDomain domain, std::initializer_list<F> inputs) {
  return poseidon_hash<F>(domain, std::span<const F>(inputs.begin(), inputs.size()));
}

/// Number of permutations `poseidon_hash` performs on `n` inputs.
constexpr std::size_t poseidon_permutations(std::size_t n) { return n == 0 ? 1 : (n + 1) / 2; }

}  // namespace polc
