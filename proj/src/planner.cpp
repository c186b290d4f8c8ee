#include <boost/functional/hash.hpp>
#include <queue>
#include <random>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "lmgr/bench_tools.hpp"
#include "lmgr/error.hpp"
#include "lmgr/relaxed_graph.hpp"

namespace lmgr {

namespace {

struct StateHash {
  std::size_t operator()(const State& s) const {
    return boost::hash_range(s.begin(), s.end());
  }
};

struct SearchNode {
  State state;
  std::size_t parent;
  ActionId via;
};

constexpr std::size_t kRoot = static_cast<std::size_t>(-1);

}  // namespace

Plan plan_observations(const GroundedProblem& p, const State& goal, std::uint64_t seed,
                       const PlannerOptions& options) {
  const State& start = p.initial_state();
  if (goal.subset_of(start)) return {};
  if (h_add(p, start, goal) == kInfinity) {
    throw UnsolvableError("goal " + p.state_string(goal) + " is not relaxed-reachable");
  }

  std::mt19937_64 rng(seed);
  std::vector<SearchNode> nodes;
  std::unordered_map<State, std::size_t, StateHash> seen;
  // (h, random tie key, node index): lowest first.
  using Entry = std::tuple<double, std::uint64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  nodes.push_back({start, kRoot, 0});
  seen.emplace(start, 0);
  open.emplace(0.0, rng(), 0);

  auto extract_plan = [&](std::size_t node) {
    Plan plan;
    for (std::size_t n = node; nodes[n].parent != kRoot; n = nodes[n].parent) {
      plan.push_back(nodes[n].via);
    }
    std::reverse(plan.begin(), plan.end());
    auto report = validate_plan(p, plan, goal);
    if (!report.valid) throw std::logic_error("planner produced an invalid plan");
    return plan;
  };

  while (!open.empty()) {
    auto [h, key, index] = open.top();
    open.pop();
    for (ActionId a = 0; a < p.num_actions(); ++a) {
      const Action& act = p.action(a);
      if (!applicable(nodes[index].state, act)) continue;
      State next = apply(nodes[index].state, act);
      if (seen.contains(next)) continue;
      if (nodes.size() >= options.node_cap) {
        throw ResourceError("planner exceeded the node cap of " + std::to_string(options.node_cap));
      }
      nodes.push_back({next, index, a});
      std::size_t child = nodes.size() - 1;
      seen.emplace(next, child);
      if (goal.subset_of(next)) return extract_plan(child);
      double hc = h_add(p, next, goal);
      if (hc == kInfinity) continue;
      open.emplace(hc, rng(), child);
    }
  }
  throw UnsolvableError("no plan reaches " + p.state_string(goal));
}

}  // namespace lmgr
