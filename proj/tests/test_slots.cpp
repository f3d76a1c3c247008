#include <gtest/gtest.h>

#include <random>

#include "polc/errors.hpp"
#include "polc/slots.hpp"

namespace {

using polc::SlotClock;

TEST(Slots, SlotBoundaries) {
  const SlotClock c{1000, 12};
  EXPECT_EQ(c.slot_of(1000), 0U);
  EXPECT_EQ(c.slot_of(1011), 0U);
  EXPECT_EQ(c.slot_of(1012), 1U);
  EXPECT_EQ(c.slot_start(5), 1060);
  EXPECT_THROW(c.slot_of(999), polc::PreGenesisError);
  EXPECT_EQ(polc::slot_of(SlotClock::side_chain(0), 17), 17U);
  EXPECT_EQ(SlotClock::ethereum().slot_duration, 12);
  EXPECT_THROW((SlotClock{0, 0}.slot_of(5)), polc::ValidationError);
}

TEST(Slots, SlotOfIsMonotoneAndCoversWindow) {
  std::mt19937_64 rng(4);
  for (std::int64_t d : {1, 2, 12, 60}) {
    const SlotClock c{1606824023, d};
    for (int i = 0; i < 1000; ++i) {
      const std::int64_t t = c.genesis + static_cast<std::int64_t>(rng() % 1000000);
      const auto s = c.slot_of(t);
      EXPECT_LE(c.slot_start(s), t);
      EXPECT_LT(t, c.slot_start(s + 1));
      EXPECT_LE(c.slot_of(t), c.slot_of(t + 1));
    }
  }
}

TEST(Slots, GapInSlotsIsTheWorstCaseOverAllAlignments) {
  for (std::int64_t d : {1, 5, 12}) {
    const SlotClock c{0, d};
    for (std::int64_t gap = 0; gap <= 70; ++gap) {
      std::uint64_t worst = 0;
      for (std::int64_t t = 0; t < 3 * d; ++t)
        for (std::int64_t delta = 0; delta <= gap; ++delta) worst = std::max(worst, c.slot_of(t + delta) - c.slot_of(t));
      EXPECT_EQ(c.gap_in_slots(gap), worst) << "d=" << d << " gap=" << gap;
    }
  }
}

polc::Digest digest(std::uint8_t b) {
  polc::Digest d{};
  d.fill(b);
  return d;
}

TEST(Ledger, AnchorAndLookup) {
  polc::LedgerSim l;
  EXPECT_EQ(l.current_slot(), 0U);
  EXPECT_EQ(l.anchor(3, digest(1)), 0U);
  EXPECT_EQ(l.anchor(3, digest(2)), 1U);
  EXPECT_EQ(l.anchor(7, digest(1)), 2U);
  EXPECT_THROW(l.anchor(6, digest(3)), polc::OutOfOrderError);
  EXPECT_EQ(l.current_slot(), 7U);
  ASSERT_TRUE(l.lookup(digest(1)));
  EXPECT_EQ(l.lookup(digest(1))->slot, 3U);  // first anchoring wins
  EXPECT_FALSE(l.lookup(digest(9)));
  EXPECT_EQ(l.entries().size(), 3U);
}

TEST(Ledger, JsonlRoundTrip) {
  polc::LedgerSim l;
  for (std::uint8_t i = 0; i < 10; ++i) l.anchor(i * 2, digest(i));
  const auto text = l.export_jsonl();
  const auto back = polc::LedgerSim::import_jsonl(text);
  EXPECT_EQ(back.export_jsonl(), text);
  EXPECT_EQ(back.digest_of_entries(), l.digest_of_entries());
  EXPECT_THROW(polc::LedgerSim::import_jsonl("{\"slot\": 1}\n"), polc::FormatError);
  EXPECT_THROW(polc::LedgerSim::import_jsonl("not json\n"), polc::FormatError);
  EXPECT_THROW(polc::LedgerSim::import_jsonl(
                   "{\"slot\":5,\"digest_hex\":\"" + std::string(64, '0') + "\"}\n{\"slot\":4,\"digest_hex\":\"" +
                   std::string(64, '1') + "\"}\n"),
               polc::OutOfOrderError);
}

TEST(Ledger, DigestOfEntriesDependsOnOrderAndSlots) {
  polc::LedgerSim a, b;
  a.anchor(1, digest(1));
  a.anchor(2, digest(2));
  b.anchor(1, digest(1));
  b.anchor(3, digest(2));
  EXPECT_NE(a.digest_of_entries(), b.digest_of_entries());
}

}  // namespace
