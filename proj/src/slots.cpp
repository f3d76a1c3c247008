#include "polc/slots.hpp"

#include <json.hpp>
#include <sstream>

#include "polc/errors.hpp"
#include "polc/hash.hpp"

namespace polc {

std::uint64_t SlotClock::slot_of(std::int64_t t) const {
  if (slot_duration <= 0) throw ValidationError("slot duration must be positive");
  if (t < genesis)
    throw PreGenesisError("timestamp " + std::to_string(t) + " precedes genesis " +
                          std::to_string(genesis));
  return static_cast<std::uint64_t>((t - genesis) / slot_duration);
}

std::uint64_t SlotClock::gap_in_slots(std::int64_t seconds) const {
  if (seconds <= 0) return 0;
  return static_cast<std::uint64_t>((seconds + slot_duration - 1) / slot_duration);
}

std::uint64_t slot_of(const SlotClock& clock, std::int64_t t) { return clock.slot_of(t); }

std::size_t LedgerSim::anchor(std::uint64_t slot, const Digest& digest) {
  if (!entries_.empty() && slot < entries_.back().slot)
    throw OutOfOrderError("slot " + std::to_string(slot) + " is before the last anchored slot " +
                          std::to_string(entries_.back().slot));
  entries_.push_back({slot, digest});
  first_index_.emplace(digest, entries_.size() - 1);
  return entries_.size() - 1;
}

std::optional<LedgerEntry> LedgerSim::lookup(const Digest& digest) const {
  auto it = first_index_.find(digest);
  if (it == first_index_.end()) return std::nullopt;
  return entries_[it->second];
}

Digest LedgerSim::digest_of_entries() const {
  Sha256 h;
  for (const auto& e : entries_) {
    ByteWriter w;
    w.u64(e.slot);
    w.raw(e.digest);
    h.update(w.bytes());
  }
  return h.finish();
}

std::string LedgerSim::export_jsonl() const {
  std::string out;
  for (const auto& e : entries_) {
    nlohmann::ordered_json j;
    j["slot"] = e.slot;
    j["digest_hex"] = to_hex(e.digest);
    out += j.dump();
    out += '\n';
  }
  return out;
}

LedgerSim LedgerSim::import_jsonl(std::string_view text) {
  LedgerSim ledger;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      ledger.anchor(j.at("slot").get<std::uint64_t>(),
                    digest_from_hex(j.at("digest_hex").get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("ledger line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return ledger;
}

}  // namespace polc
