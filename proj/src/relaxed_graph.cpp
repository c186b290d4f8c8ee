#include "lmgr/relaxed_graph.hpp"

#include <algorithm>
#include <queue>

namespace lmgr {

namespace {

bool is_banned(const ActionMask& banned, ActionId a) { return !banned.empty() && banned[a]; }

}  // namespace

RelaxedPlanningGraph::RelaxedPlanningGraph(const GroundedProblem& p, const State& start,
                                           const ActionMask& banned)
    : problem_(&p),
      fact_level_(p.num_facts(), kUnreached),
      action_level_(p.num_actions(), kUnreached) {
  std::vector<std::size_t> missing(p.num_actions());
  std::vector<FactId> frontier;
  for (FactId f : start) {
    fact_level_[f] = 0;
    frontier.push_back(f);
  }

  std::vector<ActionId> ready;
  for (ActionId a = 0; a < p.num_actions(); ++a) {
    missing[a] = p.action(a).pre.size();
    if (missing[a] == 0 && !is_banned(banned, a)) ready.push_back(a);
  }

  // Layer i: `frontier` holds facts with level i; actions made ready by them
  // (plus precondition-free actions at i=0) fire at level i.
  std::uint32_t level = 0;
  num_layers_ = 1;
  while (true) {
    for (FactId f : frontier) {
      for (ActionId a : p.consumers(f)) {
        if (--missing[a] == 0 && !is_banned(banned, a)) ready.push_back(a);
      }
    }
    std::vector<FactId> next;
    for (ActionId a : ready) {
      action_level_[a] = level;
      for (FactId f : p.action(a).add) {
        if (fact_level_[f] == kUnreached) {
          fact_level_[f] = level + 1;
          next.push_back(f);
        }
      }
    }
    ready.clear();
    if (next.empty()) break;
    // The fixpoint is bounded by |F| layers.
    ++level;
    ++num_layers_;
    frontier = std::move(next);
  }
}

State RelaxedPlanningGraph::layer(std::size_t i) const {
  std::vector<FactId> ids;
  for (FactId f = 0; f < fact_level_.size(); ++f) {
    if (fact_level_[f] <= i) ids.push_back(f);
  }
  return State(std::move(ids));
}

State RelaxedPlanningGraph::fixpoint() const { return layer(kUnreached - 1); }

std::vector<ActionId> RelaxedPlanningGraph::applicable_actions(std::size_t i) const {
  std::vector<ActionId> out;
  for (ActionId a = 0; a < action_level_.size(); ++a) {
    if (action_level_[a] <= i) out.push_back(a);
  }
  return out;
}

std::vector<ActionId> RelaxedPlanningGraph::first_achievers(FactId f) const {
  std::vector<ActionId> out;
  if (fact_level_[f] == kUnreached || fact_level_[f] == 0) return out;
  for (ActionId a : problem_->achievers(f)) {
    if (action_level_[a] == fact_level_[f] - 1) out.push_back(a);
  }
  return out;
}

RelaxedPlanningGraph build_rpg(const GroundedProblem& p, const ActionMask& banned) {
  return RelaxedPlanningGraph(p, p.initial_state(), banned);
}

bool relaxed_reachable(const RelaxedPlanningGraph& rpg, const State& goal) {
  return std::all_of(goal.begin(), goal.end(), [&](FactId f) { return rpg.reached(f); });
}

std::vector<char> relaxed_fixpoint(const GroundedProblem& p, const State& start,
                                   const ActionMask& banned) {
  std::vector<char> reached(p.num_facts(), 0);
  std::vector<std::size_t> missing(p.num_actions());
  std::vector<FactId> queue;
  queue.reserve(p.num_facts());

  auto fire = [&](ActionId a) {
    for (FactId f : p.action(a).add) {
      if (!reached[f]) {
        reached[f] = 1;
        queue.push_back(f);
      }
    }
  };
  for (FactId f : start) {
    reached[f] = 1;
    queue.push_back(f);
  }
  for (ActionId a = 0; a < p.num_actions(); ++a) {
    missing[a] = p.action(a).pre.size();
  }
  for (ActionId a = 0; a < p.num_actions(); ++a) {
    if (missing[a] == 0 && !is_banned(banned, a)) fire(a);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (ActionId a : p.consumers(queue[head])) {
      if (--missing[a] == 0 && !is_banned(banned, a)) fire(a);
    }
  }
  return reached;
}

double h_add(const GroundedProblem& p, const State& s, const State& goal) {
  // Generalized Dijkstra over facts: an action's cost becomes known once all
  // its preconditions are settled.
  std::vector<double> cost(p.num_facts(), kInfinity);
  std::vector<char> settled(p.num_facts(), 0);
  std::vector<std::size_t> missing(p.num_actions());
  std::vector<double> pre_sum(p.num_actions(), 0.0);

  using Entry = std::pair<double, FactId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  for (FactId f : s) {
    cost[f] = 0.0;
    open.emplace(0.0, f);
  }
  auto relax = [&](ActionId a) {
    const Action& act = p.action(a);
    double c = act.cost + pre_sum[a];
    for (FactId f : act.add) {
      if (c < cost[f]) {
        cost[f] = c;
        open.emplace(c, f);
      }
    }
  };
  for (ActionId a = 0; a < p.num_actions(); ++a) {
    missing[a] = p.action(a).pre.size();
    if (missing[a] == 0) relax(a);
  }

  std::size_t goals_left = goal.size();
  while (!open.empty() && goals_left > 0) {
    auto [c, f] = open.top();
    open.pop();
    if (settled[f] || c > cost[f]) continue;
    settled[f] = 1;
    if (goal.contains(f)) --goals_left;
    for (ActionId a : p.consumers(f)) {
      pre_sum[a] += c;
      if (--missing[a] == 0) relax(a);
    }
  }

  double h = 0.0;
  for (FactId f : goal) {
    if (cost[f] == kInfinity) return kInfinity;
    h += cost[f];
  }
  return h;
}

}  // namespace lmgr
