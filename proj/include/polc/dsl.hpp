#pragma once

// Claim language.
//
// A source file is a sequence of statements, one per line by convention:
//
//   prover p
//   region RoadX = polygon[(0,0), (900,0), (900,60), (0,60)]
//   anchor A = (12, -4)
//   event start at 2025-05-12T08:00:00Z
//   claim p in RoadX during [08:00, 08:20] on 2025-05-12 gap<=60s samples>=1
//   assert box p in RoadX during [...] samples>=3 and not loc(p, cell(1,2))
//
// docs/grammar.md has the full EBNF.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "polc/bytes.hpp"
#include "polc/grid.hpp"

namespace polc::dsl {

/// Named region, or an inline polygon when `polygon` is non-empty.
struct RegionRef {
  std::string name;
  grid::Ring polygon;
  bool operator==(const RegionRef&) const = default;
};

enum ClaimFlag : std::uint8_t {
  kRequireProximity = 1,
  kRequireNontransferability = 2,
};

/// Presence of `prover_id` inside `region` throughout [interval_start,
/// interval_end], with coverage and continuity annotations.
struct Claim {
  std::string prover_id;
  RegionRef region;
  std::int64_t interval_start = 0;  // UTC seconds, inclusive
  std::int64_t interval_end = 0;    // UTC seconds, inclusive
  std::uint64_t min_samples = 1;
  std::int64_t max_gap = 60;  // seconds
  std::uint8_t flags = 0;
  std::uint64_t proximity_m = 0;  // distance-bound budget under kRequireProximity

  bool require_proximity() const { return flags & kRequireProximity; }
  bool require_nontransferability() const { return flags & kRequireNontransferability; }
  bool operator==(const Claim&) const = default;
};

/// [A-Za-z_][A-Za-z0-9_]* and not a keyword of the language.
bool is_identifier(std::string_view s);

/// Throws ValidationError when an invariant of `c` fails; a valid claim
/// always pretty-prints to source that parses back to it.
void validate(const Claim& c);

struct Formula;

/// Location target: a single cell, or every cell of a named region.
struct LocTarget {
  std::optional<grid::CellId> cell;
  std::string region;
  bool operator==(const LocTarget&) const = default;
};

struct LocAtom {
  std::string prover;
  LocTarget where;
  std::optional<std::int64_t> at;  // absent: at some sample
  bool operator==(const LocAtom&) const = default;
};

struct DistAtom {
  std::string prover;
  std::string anchor;
  std::uint64_t bound_m = 0;
  std::optional<std::int64_t> at;
  bool operator==(const DistAtom&) const = default;
};

struct TimeOrder {
  std::string first;
  std::string second;
  bool operator==(const TimeOrder&) const = default;
};

struct IntervalBox {
  Claim claim;
  std::vector<Formula> inner;  // zero or one sub-formula
  bool operator==(const IntervalBox&) const;
};

struct And {
  std::vector<Formula> args;
  bool operator==(const And&) const;
};
struct Or {
  std::vector<Formula> args;
  bool operator==(const Or&) const;
};
struct Not {
  std::vector<Formula> arg;  // exactly one
  bool operator==(const Not&) const;
};

struct Formula {
  std::variant<LocAtom, DistAtom, TimeOrder, IntervalBox, And, Or, Not> node;
  bool operator==(const Formula&) const = default;
};

Formula box_of(const Claim& claim);

/// Parsed source file: declarations plus at most one claim and one assertion.
struct Program {
  std::vector<std::string> provers;
  std::map<std::string, grid::Ring> regions;
  std::map<std::string, grid::Point> anchors;
  std::map<std::string, std::int64_t> events;
  std::optional<Claim> claim;
  std::optional<Formula> formula;
  bool operator==(const Program&) const = default;
};

struct ParseOptions {
  /// Region names defined outside the source. Null disables the check for
  /// undeclared names; otherwise names must be declared or listed here.
  const std::set<std::string>* known_regions = nullptr;
};

/// Throws SyntaxError, ValidationError, UnknownRegionError, and
/// UnboundIdentifierError for undeclared names in assertions.
Program parse_program(std::string_view source, const ParseOptions& options = {});

/// Source must contain a claim statement.
Claim parse_claim(std::string_view source, const ParseOptions& options = {});

std::string pretty_print(const Program& program);
std::string pretty_print(const Claim& claim);
std::string pretty_print(const Formula& formula);

/// Injective byte encoding: magic, fixed field order, big-endian integers,
/// length-prefixed strings.
Bytes canonical_serialize(const Claim& claim);
Claim canonical_deserialize(std::span<const std::uint8_t> bytes);  // throws FormatError

nlohmann::ordered_json to_json(const Claim& claim);
nlohmann::ordered_json to_json(const Formula& formula);
nlohmann::ordered_json to_json(const Program& program);
Claim claim_from_json(const nlohmann::json& j);
Formula formula_from_json(const nlohmann::json& j);
Program program_from_json(const nlohmann::json& j);

/// ISO-8601 "YYYY-MM-DDTHH:MM[:SS]Z" to UTC seconds and back.
std::int64_t parse_iso8601(std::string_view text);
std::string format_iso8601(std::int64_t t);

}  // namespace polc::dsl
