#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polc/bytes.hpp"

namespace polc {

/// Wall clock to ledger slot mapping. Slot n covers the half-open window
/// [genesis + n * slot_duration, genesis + (n + 1) * slot_duration).
struct SlotClock {
  std::int64_t genesis = 0;       // UTC seconds
  std::int64_t slot_duration = 12;  // seconds, > 0

  static SlotClock ethereum(std::int64_t genesis = 0) { return {genesis, 12}; }
  static SlotClock side_chain(std::int64_t genesis = 0) { return {genesis, 1}; }

  /// Throws PreGenesisError for t < genesis.
  std::uint64_t slot_of(std::int64_t t) const;
  std::int64_t slot_start(std::uint64_t slot) const {
    return genesis + static_cast<std::int64_t>(slot) * slot_duration;
  }
  /// Largest slot distance two timestamps at most `seconds` apart can have.
  std::uint64_t gap_in_slots(std::int64_t seconds) const;

  bool operator==(const SlotClock&) const = default;
};

std::uint64_t slot_of(const SlotClock& clock, std::int64_t t);

struct LedgerEntry {
  std::uint64_t slot = 0;
  Digest digest{};
  bool operator==(const LedgerEntry&) const = default;
};

/// Single-writer, append-only ledger simulation used as the root registry.
/// Readers may run concurrently once an append has returned.
class LedgerSim {
 public:
  /// Appends (slot, digest); throws OutOfOrderError if slot is below the last entry's.
  std::size_t anchor(std::uint64_t slot, const Digest& digest);

  /// First entry carrying `digest`.
  std::optional<LedgerEntry> lookup(const Digest& digest) const;

  std::span<const LedgerEntry> entries() const { return entries_; }
  std::uint64_t current_slot() const { return entries_.empty() ? 0 : entries_.back().slot; }

  /// SHA-256 over all entries in order.
  Digest digest_of_entries() const;

  /// One JSON object {"slot":..,"digest_hex":".."} per line.
  std::string export_jsonl() const;
  static LedgerSim import_jsonl(std::string_view text);

 private:
  std::vector<LedgerEntry> entries_;
  std::map<Digest, std::size_t> first_index_;
};

}  // namespace polc
