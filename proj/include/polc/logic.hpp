#pragma once

// Ground-truth evaluator for the claim logic over a true trajectory.
//
// Semantics (time is discretised through the slot clock):
//   box p in R during [t1,t2] ...  every sample with t1 <= t <= t2 lies in a
//                                  cell of R; at least min_samples of them;
//                                  consecutive slot gaps <= ceil(gap / slot);
//                                  the inner formula holds on those samples
//   loc(p, Z [, t])                some sample (in slot(t) if given) is in Z
//   dist(p, A [, t]) <= d          some sample (in slot(t)) is within d of A
//   before(E1, E2)                 slot(E1) < slot(E2)

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "polc/dsl.hpp"
#include "polc/grid.hpp"
#include "polc/slots.hpp"

namespace polc::logic {

struct TrajectorySample {
  std::int64_t wall_time = 0;
  double x = 0;
  double y = 0;
  bool operator==(const TrajectorySample&) const = default;
};

/// True positions of one prover, strictly increasing in time.
struct Trajectory {
  std::string prover_id;
  std::vector<TrajectorySample> samples;
};

struct Environment {
  grid::HexGrid grid{grid::kDefaultResolution};
  SlotClock clock;
  std::map<std::string, std::vector<grid::CellId>> regions;  // sorted cell lists
  std::map<std::string, grid::Point> anchors;
  std::map<std::string, std::int64_t> events;

  /// Rasterises and records every region of `program` and copies its anchors and events.
  void add_declarations(const dsl::Program& program);
};

/// Throws UnboundIdentifierError for names missing from `env` or a prover
/// other than the trajectory's, and ValidationError for an unsorted trajectory.
bool eval(const dsl::Formula& formula, const Trajectory& trajectory, const Environment& env);
bool eval(const dsl::Claim& claim, const Trajectory& trajectory, const Environment& env);

/// One scenario outcome labelled with its ground truth.
struct Verdict {
  std::string scenario;
  bool ground_truth = false;
  bool accepted = false;
  std::string label;  // rejection reason or error kind
};

struct Report {
  std::size_t total = 0;
  std::size_t truths = 0;
  std::size_t falsehoods = 0;
  std::size_t accepted_true = 0;
  std::size_t accepted_false = 0;
  double accept_given_true_rate = 0;   // NaN when no true scenarios
  double accept_given_false_rate = 0;  // NaN when no false scenarios
  std::vector<Verdict> disagreements;  // rejected truths and accepted falsehoods

  nlohmann::ordered_json to_json() const;
  std::string table() const;
};

Report soundness_completeness_report(const std::vector<Verdict>& batch);

}  // namespace polc::logic
