#include "polc/logic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "polc/errors.hpp"

namespace polc::logic {

void Environment::add_declarations(const dsl::Program& program) {
  for (const auto& [name, ring] : program.regions) regions[name] = grid::rasterize(ring, grid);
  for (const auto& [name, pt] : program.anchors) anchors[name] = pt;
  for (const auto& [name, t] : program.events) events[name] = t;
}

namespace {

using Samples = std::vector<TrajectorySample>;

struct Evaluator {
  const Trajectory& trajectory;
  const Environment& env;

  void check_prover(const std::string& prover) const {
    if (prover != trajectory.prover_id)
      throw UnboundIdentifierError("no trajectory for prover '" + prover + "'");
  }

  const std::vector<grid::CellId>& region(const std::string& name) const {
    auto it = env.regions.find(name);
    if (it == env.regions.end()) throw UnboundIdentifierError("region '" + name + "' is not bound");
    return it->second;
  }

  std::vector<grid::CellId> cells_of(const dsl::RegionRef& ref) const {
    if (!ref.polygon.empty()) return grid::rasterize(ref.polygon, env.grid);
    return region(ref.name);
  }

  bool in_cells(const TrajectorySample& s, const std::vector<grid::CellId>& cells) const {
    const grid::CellId c = env.grid.locate({s.x, s.y});
    return std::binary_search(cells.begin(), cells.end(), c);
  }

  bool in_slot(const TrajectorySample& s, const std::optional<std::int64_t>& at) const {
    if (!at) return true;
    return s.wall_time >= env.clock.genesis && env.clock.slot_of(s.wall_time) == env.clock.slot_of(*at);
  }

  bool box(const dsl::IntervalBox& b, const Samples& samples) const {
    const dsl::Claim& c = b.claim;
    check_prover(c.prover_id);
    const auto cells = cells_of(c.region);
    Samples window;
    for (const auto& s : samples)
      if (s.wall_time >= c.interval_start && s.wall_time <= c.interval_end) window.push_back(s);
    for (const auto& s : window)
      if (!in_cells(s, cells)) return false;
    if (window.size() < c.min_samples) return false;
    const std::uint64_t max_slots = env.clock.gap_in_slots(c.max_gap);
    for (std::size_t i = 1; i < window.size(); ++i)
      if (env.clock.slot_of(window[i].wall_time) - env.clock.slot_of(window[i - 1].wall_time) > max_slots)
        return false;
    if (b.inner.empty()) return true;
    return run(b.inner.front(), window);
  }

  bool run(const dsl::Formula& f, const Samples& samples) const {
    return std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, dsl::LocAtom>) {
            check_prover(n.prover);
            std::vector<grid::CellId> cells;
            if (n.where.cell)
              cells = {*n.where.cell};
            else
              cells = region(n.where.region);
            const grid::HexGrid g = n.where.cell ? grid::HexGrid(n.where.cell->resolution) : env.grid;
            return std::any_of(samples.begin(), samples.end(), [&](const TrajectorySample& s) {
              return in_slot(s, n.at) && std::binary_search(cells.begin(), cells.end(), g.locate({s.x, s.y}));
            });
          } else if constexpr (std::is_same_v<T, dsl::DistAtom>) {
            check_prover(n.prover);
            auto it = env.anchors.find(n.anchor);
            if (it == env.anchors.end()) throw UnboundIdentifierError("anchor '" + n.anchor + "' is not bound");
            const grid::Point a = it->second;
            const double bound = static_cast<double>(n.bound_m);
            return std::any_of(samples.begin(), samples.end(), [&](const TrajectorySample& s) {
              return in_slot(s, n.at) && std::hypot(s.x - a.x, s.y - a.y) <= bound;
            });
          } else if constexpr (std::is_same_v<T, dsl::TimeOrder>) {
            auto a = env.events.find(n.first), b = env.events.find(n.second);
            if (a == env.events.end()) throw UnboundIdentifierError("event '" + n.first + "' is not bound");
            if (b == env.events.end()) throw UnboundIdentifierError("event '" + n.second + "' is not bound");
            return env.clock.slot_of(a->second) < env.clock.slot_of(b->second);
          } else if constexpr (std::is_same_v<T, dsl::IntervalBox>) {
            return box(n, samples);
          } else if constexpr (std::is_same_v<T, dsl::And>) {
            bool all = true;
            for (const auto& a : n.args) all = run(a, samples) && all;  // evaluate all for binding errors
            return all;
          } else if constexpr (std::is_same_v<T, dsl::Or>) {
            bool any = false;
            for (const auto& a : n.args) any = run(a, samples) || any;
            return any;
          } else {
            return !run(n.arg.front(), samples);
          }
        },
        f.node);
  }
};

}  // namespace

bool eval(const dsl::Formula& formula, const Trajectory& trajectory, const Environment& env) {
  for (std::size_t i = 1; i < trajectory.samples.size(); ++i)
    if (trajectory.samples[i].wall_time <= trajectory.samples[i - 1].wall_time)
      throw ValidationError("trajectory times must be strictly increasing");
  return Evaluator{trajectory, env}.run(formula, trajectory.samples);
}

bool eval(const dsl::Claim& claim, const Trajectory& trajectory, const Environment& env) {
  return eval(dsl::box_of(claim), trajectory, env);
}

Report soundness_completeness_report(const std::vector<Verdict>& batch) {
  Report r;
  r.total = batch.size();
  for (const auto& v : batch) {
    if (v.ground_truth) {
      ++r.truths;
      if (v.accepted) ++r.accepted_true;
    } else {
      ++r.falsehoods;
      if (v.accepted) ++r.accepted_false;
    }
    if (v.ground_truth != v.accepted) r.disagreements.push_back(v);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.accept_given_true_rate = r.truths ? static_cast<double>(r.accepted_true) / r.truths : nan;
  r.accept_given_false_rate = r.falsehoods ? static_cast<double>(r.accepted_false) / r.falsehoods : nan;
  return r;
}

nlohmann::ordered_json Report::to_json() const {
  auto rate = [](double v) -> nlohmann::ordered_json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  nlohmann::ordered_json j;
  j["total"] = total;
  j["true_claims"] = truths;
  j["false_claims"] = falsehoods;
  j["accepted_true"] = accepted_true;
  j["accepted_false"] = accepted_false;
  j["accept_given_true_rate"] = rate(accept_given_true_rate);
  j["accept_given_false_rate"] = rate(accept_given_false_rate);
  auto d = nlohmann::ordered_json::array();
  for (const auto& v : disagreements)
    d.push_back({{"scenario", v.scenario}, {"ground_truth", v.ground_truth}, {"accepted", v.accepted},
                 {"label", v.label}});
  j["disagreements"] = d;
  return j;
}

std::string Report::table() const {
  auto rate = [](double v) {
    if (std::isnan(v)) return std::string("n/a");
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "ground truth | scenarios | accepted | rate\n";
  os << "true         | " << truths << " | " << accepted_true << " | " << rate(accept_given_true_rate) << "\n";
  os << "false        | " << falsehoods << " | " << accepted_false << " | " << rate(accept_given_false_rate)
     << "\n";
  for (const auto& v : disagreements)
    os << "disagreement: " << v.scenario << " truth=" << (v.ground_truth ? "true" : "false")
       << " accepted=" << (v.accepted ? "yes" : "no") << " label=" << v.label << "\n";
  return os.str();
}

}  // namespace polc::logic
