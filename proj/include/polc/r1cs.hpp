#pragma once

// Rank-1 constraint systems: <A,w> * <B,w> = <C,w> over a prime field.
//
// A linear combination is a sparse sum of variable terms plus a constant, so
// there is no reserved "one" variable. Public inputs occupy the first
// `num_public` variable indices.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <json.hpp>

#include "polc/errors.hpp"
#include "polc/field.hpp"

namespace polc::r1cs {

struct Var {
  std::uint32_t index = 0;
};

template <ff::PrimeField F>
class LinearCombination {
 public:
  using Term = std::pair<std::uint32_t, F>;
  using Terms = boost::container::small_vector<Term, 3>;

  LinearCombination() = default;
  LinearCombination(Var v) : terms_{{v.index, F::one()}} {}  // NOLINT(implicit)
  LinearCombination(const F& c) : constant_(c) {}            // NOLINT(implicit)
  static LinearCombination constant(std::int64_t c) { return LinearCombination(F::from_i64(c)); }

  const Terms& terms() const { return terms_; }
  const F& constant_term() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }

  LinearCombination operator+(const LinearCombination& o) const { return merge<false>(o); }
  LinearCombination operator-(const LinearCombination& o) const { return merge<true>(o); }
  LinearCombination operator-() const {
    LinearCombination out = *this;
    for (auto& t : out.terms_) t.second = -t.second;
    out.constant_ = -constant_;
    return out;
  }
  LinearCombination operator*(const F& k) const {
    LinearCombination out;
    if (k.is_zero()) return out;
    out.terms_.reserve(terms_.size());
    for (const auto& [i, c] : terms_) out.terms_.emplace_back(i, c * k);
    out.constant_ = constant_ * k;
    return out;
  }
  LinearCombination& add_constant(const F& k) {
    constant_ += k;
    return *this;
  }

  LinearCombination& operator+=(const LinearCombination& o) { return *this = *this + o; }
  LinearCombination& operator-=(const LinearCombination& o) { return *this = *this - o; }

  F evaluate(const std::vector<F>& values) const {
    F acc = constant_;
    const F one = F::one();
    for (const auto& [i, c] : terms_) acc += c == one ? values[i] : values[i] * c;
    return acc;
  }

 private:
  template <bool Subtract>
  LinearCombination merge(const LinearCombination& o) const {
    auto sign = [](const F& v) { return Subtract ? -v : v; };
    LinearCombination out;
    out.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
        out.terms_.push_back(terms_[i++]);
      } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
        out.terms_.emplace_back(o.terms_[j].first, sign(o.terms_[j].second));
        ++j;
      } else {
        const F c = Subtract ? terms_[i].second - o.terms_[j].second : terms_[i].second + o.terms_[j].second;
        if (!c.is_zero()) out.terms_.emplace_back(terms_[i].first, c);
        ++i;
        ++j;
      }
    }
    out.constant_ = Subtract ? constant_ - o.constant_ : constant_ + o.constant_;
    return out;
  }

  Terms terms_;  // sorted by index, no zero coefficients
  F constant_ = F::zero();
};

template <ff::PrimeField F>
LinearCombination<F> operator*(const F& k, const LinearCombination<F>& lc) {
  return lc * k;
}

template <ff::PrimeField F>
struct Constraint {
  LinearCombination<F> a, b, c;
  std::uint16_t label = 0;
};

/// Constraints are stored flat: every term of A, B and C in one array, with
/// the constant term under index kConstant.
template <ff::PrimeField F>
struct ConstraintSystem {
  using Term = typename LinearCombination<F>::Term;
  static constexpr std::uint32_t kConstant = 0xffffffffU;

  std::size_t num_vars = 0;
  std::size_t num_public = 0;
  std::vector<Term> terms;
  std::vector<std::uint32_t> ends;  // end offsets of A, B, C per constraint
  std::vector<std::uint16_t> label_ids;
  std::vector<std::string> labels{""};  // interned; index 0 is unlabelled

  std::size_t size() const { return label_ids.size(); }
  const std::string& label_of(std::size_t constraint) const { return labels[label_ids[constraint]]; }

  std::uint16_t intern(std::string_view label) {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return static_cast<std::uint16_t>(i);
    labels.emplace_back(label);
    return static_cast<std::uint16_t>(labels.size() - 1);
  }

  void add(const LinearCombination<F>& a, const LinearCombination<F>& b, const LinearCombination<F>& c,
           std::uint16_t label) {
    for (const auto* lc : {&a, &b, &c}) {
      terms.insert(terms.end(), lc->terms().begin(), lc->terms().end());
      if (!lc->constant_term().is_zero()) terms.emplace_back(kConstant, lc->constant_term());
      ends.push_back(static_cast<std::uint32_t>(terms.size()));
    }
    label_ids.push_back(label);
  }

  /// Part 0, 1, 2 (A, B, C) of constraint i as raw terms.
  std::span<const Term> part(std::size_t i, int which) const {
    const std::size_t k = 3 * i + static_cast<std::size_t>(which);
    const std::size_t begin = k == 0 ? 0 : ends[k - 1];
    return {terms.data() + begin, ends[k] - begin};
  }

  Constraint<F> constraint(std::size_t i) const {
    Constraint<F> out;
    LinearCombination<F>* dst[3] = {&out.a, &out.b, &out.c};
    for (int w = 0; w < 3; ++w)
      for (const auto& [idx, coeff] : part(i, w))
        *dst[w] += idx == kConstant ? LinearCombination<F>(coeff) : LinearCombination<F>(Var{idx}) * coeff;
    out.label = label_ids[i];
    return out;
  }

  F evaluate(std::span<const Term> lc, const std::vector<F>& values) const {
    F acc = F::zero();
    const F one = F::one();
    for (const auto& [idx, coeff] : lc) {
      if (idx == kConstant) acc += coeff;
      else acc += coeff == one ? values[idx] : values[idx] * coeff;
    }
    return acc;
  }
};

template <ff::PrimeField F>
struct Assignment {
  std::vector<F> values;
};

struct SatResult {
  bool ok = true;
  std::size_t index = 0;  // first failing constraint when !ok
  std::string label;
  explicit operator bool() const { return ok; }
};

template <ff::PrimeField F>
SatResult is_satisfied(const ConstraintSystem<F>& cs, const Assignment<F>& a) {
  if (a.values.size() != cs.num_vars)
    throw LengthMismatchError("assignment has " + std::to_string(a.values.size()) +
                              " values, system has " + std::to_string(cs.num_vars) + " variables");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs.evaluate(cs.part(i, 0), a.values) * cs.evaluate(cs.part(i, 1), a.values) !=
        cs.evaluate(cs.part(i, 2), a.values))
      return {false, i, cs.label_of(i)};
  }
  return {};
}

/// Incremental builder producing a system and its assignment together.
template <ff::PrimeField F>
class Circuit {
 public:
  using LC = LinearCombination<F>;

  Circuit() = default;
  /// Without a witness every value reads as zero; only the system is built.
  explicit Circuit(bool with_witness) : with_witness_(with_witness) {}
  bool with_witness() const { return with_witness_; }

  /// Public inputs must all be allocated before any private variable.
  Var alloc_public(const F& value) {
    if (cs_.num_public != cs_.num_vars)
      throw ValidationError("public inputs must precede private variables");
    ++cs_.num_public;
    return alloc(value);
  }
  Var alloc(const F& value) {
    values_.push_back(value);
    return Var{static_cast<std::uint32_t>(cs_.num_vars++)};
  }
  void enforce(const LC& a, const LC& b, const LC& c) { cs_.add(a, b, c, label_); }
  void enforce_equal(const LC& x, const LC& y) { enforce(x - y, LC(F::one()), LC()); }

  void set_label(std::string_view label) { label_ = cs_.intern(label); }

  F value(const LC& lc) const { return with_witness_ ? lc.evaluate(values_) : F::zero(); }
  F value(Var v) const { return values_[v.index]; }

  /// Replaces `lc` by a fresh variable constrained to equal it.
  LC materialize(const LC& lc) {
    if (lc.is_constant() || (lc.terms().size() == 1 && lc.constant_term().is_zero() &&
                             lc.terms()[0].second == F::one()))
      return lc;
    const Var v = alloc(value(lc));
    enforce(lc, LC(F::one()), LC(v));
    return LC(v);
  }

  /// Product of two combinations; folds constants without a constraint.
  LC mul(const LC& x, const LC& y) {
    if (x.is_constant()) return y * x.constant_term();
    if (y.is_constant()) return x * y.constant_term();
    return mul_known(x, y, with_witness_ ? value(x) * value(y) : F::zero());
  }
  /// As mul, with the caller supplying value(x) * value(y); both must be non-constant.
  LC mul_known(const LC& x, const LC& y, const F& product) {
    const Var v = alloc(product);
    enforce(x, y, LC(v));
    return LC(v);
  }

  const ConstraintSystem<F>& system() const { return cs_; }
  const std::vector<F>& values() const { return values_; }
  ConstraintSystem<F> take_system() && { return std::move(cs_); }
  Assignment<F> take_assignment() && { return {std::move(values_)}; }

 private:
  ConstraintSystem<F> cs_;
  std::vector<F> values_;
  std::uint16_t label_ = 0;
  bool with_witness_ = true;
};

/// JSON dump: {field_prime, num_vars, public, constraints:[{A,B,C,label}]}.
/// Coefficients are hex strings keyed by variable index; the constant term
/// uses the key "one".
template <ff::PrimeField F>
nlohmann::ordered_json to_json(const ConstraintSystem<F>& cs) {
  auto lc_json = [](const LinearCombination<F>& lc) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    if (!lc.constant_term().is_zero()) j["one"] = lc.constant_term().to_hex();
    for (const auto& [i, c] : lc.terms()) j[std::to_string(i)] = c.to_hex();
    return j;
  };
  nlohmann::ordered_json out;
  out["field_prime"] = F::modulus_hex();
  out["num_vars"] = cs.num_vars;
  auto pub = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < cs.num_public; ++i) pub.push_back(i);
  out["public"] = pub;
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto k = cs.constraint(i);
    arr.push_back({{"A", lc_json(k.a)}, {"B", lc_json(k.b)}, {"C", lc_json(k.c)}, {"label", cs.label_of(i)}});
  }
  out["constraints"] = std::move(arr);
  return out;
}

}  // namespace polc::r1cs
