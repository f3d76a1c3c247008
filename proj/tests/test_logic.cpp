#include <gtest/gtest.h>

#include <random>

#include "polc/errors.hpp"
#include "polc/logic.hpp"

namespace {

using namespace polc;
using logic::Trajectory;
using logic::TrajectorySample;

constexpr std::int64_t kT0 = 1747036800;  // 2025-05-12T08:00:00Z

struct Fixture {
  logic::Environment env;
  Trajectory traj;
  dsl::Program program;

  Fixture() {
    env.clock = SlotClock{kT0 - 1200, 12};
    program = dsl::parse_program(R"(
      prover p
      region Box = polygon[(-200,-200), (200,-200), (200,200), (-200,200)]
      region Far = polygon[(1000,1000), (1400,1000), (1400,1400), (1000,1400)]
      anchor Home = (0, 0)
      event open at 2025-05-12T08:00:00Z
      event close at 2025-05-12T08:10:00Z
    )");
    env.add_declarations(program);
    traj.prover_id = "p";
    for (int i = 0; i < 10; ++i) traj.samples.push_back({kT0 + 30 * i, 10.0 * i, 0});
  }

  bool holds(const std::string& assertion) {
    auto src = dsl::pretty_print(program) + "assert " + assertion + "\n";
    return logic::eval(*dsl::parse_program(src).formula, traj, env);
  }
};

TEST(Logic, AtomsOnAStraightWalk) {
  Fixture f;
  EXPECT_TRUE(f.holds("loc(p, Box)"));
  EXPECT_FALSE(f.holds("loc(p, Far)"));
  EXPECT_TRUE(f.holds("loc(p, cell(0, 0))"));
  EXPECT_TRUE(f.holds("loc(p, cell(0, 0), 2025-05-12T08:00:05Z)"));
  EXPECT_FALSE(f.holds("loc(p, cell(0, 0), 2025-05-12T08:04:00Z)"));  // by then at x = 80
  EXPECT_TRUE(f.holds("dist(p, Home) <= 0m"));
  EXPECT_TRUE(f.holds("dist(p, Home, 2025-05-12T08:04:30Z) <= 90m"));
  EXPECT_FALSE(f.holds("dist(p, Home, 2025-05-12T08:04:30Z) <= 89m"));
  EXPECT_TRUE(f.holds("before(open, close)"));
  EXPECT_FALSE(f.holds("before(close, open)"));
  EXPECT_FALSE(f.holds("before(open, open)"));
}

TEST(Logic, BoxSemantics) {
  Fixture f;
  const std::string during = " during [2025-05-12T08:00:00Z, 2025-05-12T08:04:30Z]";
  EXPECT_TRUE(f.holds("box p in Box" + during + " samples>=10 gap<=30s"));
  EXPECT_FALSE(f.holds("box p in Box" + during + " samples>=11"));
  EXPECT_FALSE(f.holds("box p in Box" + during + " gap<=24s"));  // some 30 s steps span 3 slots
  EXPECT_TRUE(f.holds("box p in Box" + during + " gap<=25s"));
  EXPECT_FALSE(f.holds("box p in Far" + during));
  // a window with no samples holds vacuously when no samples are required
  EXPECT_TRUE(f.holds("box p in Far during [2025-05-12T09:00:00Z, 2025-05-12T09:10:00Z] samples>=0"));
  EXPECT_FALSE(f.holds("box p in Far during [2025-05-12T09:00:00Z, 2025-05-12T09:10:00Z] samples>=1"));
  // inner formulas see only the window
  EXPECT_TRUE(f.holds("box p in Box during [2025-05-12T08:00:00Z, 2025-05-12T08:00:30Z] { loc(p, cell(0,0)) }"));
  EXPECT_FALSE(f.holds("box p in Box during [2025-05-12T08:03:00Z, 2025-05-12T08:04:30Z] { loc(p, cell(0,0)) }"));
  // inline polygons
  EXPECT_TRUE(f.holds("box p in polygon[(-50,-50),(150,-50),(150,50),(-50,50)]" + during));
  EXPECT_FALSE(f.holds("box p in polygon[(-50,-50),(50,-50),(50,50),(-50,50)]" + during));
}

TEST(Logic, Errors) {
  Fixture f;
  f.traj.prover_id = "q";
  EXPECT_THROW(f.holds("loc(p, Box)"), UnboundIdentifierError);
  Fixture g;
  g.env.regions.erase("Far");
  EXPECT_THROW(g.holds("loc(p, Far)"), UnboundIdentifierError);
  Fixture h;
  h.traj.samples.push_back(h.traj.samples.back());
  EXPECT_THROW(h.holds("loc(p, Box)"), ValidationError);
}

// Random formulas over random walks: boolean identities must hold.
TEST(Logic, BooleanLawsOnRandomWalks) {
  std::mt19937_64 rng(12);
  const char* atoms[] = {
      "loc(p, Box)",
      "loc(p, cell(1, 0))",
      "dist(p, Home) <= 60m",
      "before(open, close)",
      "box p in Box during [2025-05-12T08:00:00Z, 2025-05-12T08:05:00Z] samples>=3",
      "box p in Box during [2025-05-12T08:00:00Z, 2025-05-12T08:05:00Z] gap<=40s",
  };
  for (int trial = 0; trial < 200; ++trial) {
    Fixture f;
    f.traj.samples.clear();
    std::int64_t t = kT0 - 60;
    std::uniform_real_distribution<double> step(-40, 40);
    double x = 0, y = 0;
    for (int i = 0; i < 12; ++i) {
      t += 1 + static_cast<std::int64_t>(rng() % 50);
      x += step(rng);
      y += step(rng);
      f.traj.samples.push_back({t, x, y});
    }
    for (const char* a : atoms)
      for (const char* b : atoms) {
        const std::string A = std::string("(") + a + ")", B = std::string("(") + b + ")";
        const bool va = f.holds(A), vb = f.holds(B);
        ASSERT_EQ(f.holds(A + " and " + B), va && vb);
        ASSERT_EQ(f.holds(A + " or " + B), va || vb);
        ASSERT_EQ(f.holds("not " + A), !va);
        ASSERT_EQ(f.holds("not (" + A + " and " + B + ")"), f.holds("not " + A + " or not " + B));
      }
    // a box over the whole walk with no requirements equals "every sample in Box"
    bool all_in = true;
    for (const auto& s : f.traj.samples) {
      const auto c = f.env.grid.locate({s.x, s.y});
      all_in = all_in && std::binary_search(f.env.regions["Box"].begin(), f.env.regions["Box"].end(), c);
    }
    ASSERT_EQ(f.holds("box p in Box during [2025-05-12T07:00:00Z, 2025-05-12T09:00:00Z] samples>=0 gap<=2h"),
              all_in);
  }
}

TEST(Logic, ReportRates) {
  std::vector<logic::Verdict> batch{
      {"a", true, true, ""}, {"b", true, false, "C3"}, {"c", false, false, "C5"}, {"d", false, false, "C4"}};
  const auto r = logic::soundness_completeness_report(batch);
  EXPECT_EQ(r.total, 4U);
  EXPECT_DOUBLE_EQ(r.accept_given_true_rate, 0.5);
  EXPECT_DOUBLE_EQ(r.accept_given_false_rate, 0.0);
  ASSERT_EQ(r.disagreements.size(), 1U);
  EXPECT_EQ(r.disagreements[0].scenario, "b");
  EXPECT_TRUE(r.to_json()["accept_given_true_rate"].is_number());
  const auto empty = logic::soundness_completeness_report({});
  EXPECT_TRUE(std::isnan(empty.accept_given_false_rate));
  EXPECT_TRUE(empty.to_json()["accept_given_false_rate"].is_null());
  EXPECT_NE(r.table().find("disagreement: b"), std::string::npos);
}

}  // namespace
