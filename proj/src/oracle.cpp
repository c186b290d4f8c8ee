#include <algorithm>
#include <boost/functional/hash.hpp>
#include <deque>
#include <set>
#include <unordered_map>

#include "lmgr/bench_tools.hpp"
#include "lmgr/error.hpp"

namespace lmgr {

namespace {

using Bits = std::vector<std::uint64_t>;

struct StateHash {
  std::size_t operator()(const State& s) const { return boost::hash_range(s.begin(), s.end()); }
};

bool test_bit(const Bits& b, FactId f) { return (b[f / 64] >> (f % 64)) & 1U; }

}  // namespace

LandmarkOracle::LandmarkOracle(const GroundedProblem& p, const State& goal,
                               const OracleOptions& options)
    : problem_(&p), goal_(goal) {
  // Explicit state space, breadth first.
  std::vector<State> states{p.initial_state()};
  std::vector<std::vector<std::size_t>> successors;
  std::unordered_map<State, std::size_t, StateHash> index{{p.initial_state(), 0}};
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::vector<std::size_t> succ;
    if (!goal.subset_of(states[i])) {
      for (const auto& a : p.actions()) {
        if (!applicable(states[i], a)) continue;
        State next = apply(states[i], a);
        auto [it, inserted] = index.emplace(next, states.size());
        if (inserted) {
          if (states.size() >= options.state_cap) {
            throw ResourceError("oracle refuses: more than " + std::to_string(options.state_cap) +
                                " reachable states");
          }
          states.push_back(std::move(next));
        }
        succ.push_back(it->second);
      }
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
    successors.push_back(std::move(succ));
  }
  reachable_states_ = states.size();
  if (std::none_of(states.begin(), states.end(),
                   [&](const State& s) { return goal.subset_of(s); })) {
    throw UnsolvableError("oracle: goal " + p.state_string(goal) + " is unreachable");
  }

  const std::size_t words = (p.num_facts() + 63) / 64;
  std::vector<Bits> state_bits(states.size(), Bits(words, 0));
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (FactId f : states[i]) state_bits[i][f / 64] |= std::uint64_t{1} << (f % 64);
  }

  // Depth-first enumeration of simple paths that end at their first goal
  // state. Each frame keeps the trace union up to and including its state.
  struct Frame {
    std::size_t state;
    std::size_t next_child;
    Bits trace;
  };
  std::set<Bits> traces;
  std::vector<char> on_path(states.size(), 0);
  std::vector<Frame> stack;
  stack.push_back({0, 0, state_bits[0]});
  on_path[0] = 1;
  std::size_t steps = 0;
  while (!stack.empty()) {
    if (++steps > options.path_cap) {
      throw ResourceError("oracle refuses: plan enumeration exceeded " +
                          std::to_string(options.path_cap) + " steps");
    }
    Frame& top = stack.back();
    if (goal.subset_of(states[top.state])) {
      ++plan_count_;
      traces.insert(top.trace);
      on_path[top.state] = 0;
      stack.pop_back();
      continue;
    }
    const auto& succ = successors[top.state];
    while (top.next_child < succ.size() && on_path[succ[top.next_child]]) ++top.next_child;
    if (top.next_child == succ.size()) {
      on_path[top.state] = 0;
      stack.pop_back();
      continue;
    }
    std::size_t child = succ[top.next_child++];
    Bits trace = top.trace;
    for (std::size_t w = 0; w < words; ++w) trace[w] |= state_bits[child][w];
    on_path[child] = 1;
    stack.push_back({child, 0, std::move(trace)});
  }
  traces_.assign(traces.begin(), traces.end());
}

bool LandmarkOracle::confirms(const std::vector<FactId>& disjuncts) const {
  return std::all_of(traces_.begin(), traces_.end(), [&](const Bits& t) {
    return std::any_of(disjuncts.begin(), disjuncts.end(),
                       [&](FactId f) { return test_bit(t, f); });
  });
}

LandmarkSet LandmarkOracle::landmarks() const {
  LandmarkSet set;
  set.goal = goal_;
  set.extractor = Extractor::Exhaustive;
  for (FactId f = 0; f < problem_->num_facts(); ++f) {
    if (confirms({f})) {
      set.landmarks.push_back(Landmark{{f}, classify(*problem_, goal_, {f})});
    }
  }
  return set;
}

LandmarkSet oracle_landmarks(const GroundedProblem& p, const State& goal, std::size_t state_cap) {
  OracleOptions options;
  options.state_cap = state_cap;
  return LandmarkOracle(p, goal, options).landmarks();
}

}  // namespace lmgr
