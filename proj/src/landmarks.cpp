#include "lmgr/landmarks.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "lmgr/relaxed_graph.hpp"

namespace lmgr {

std::string_view to_string(LandmarkCategory c) {
  switch (c) {
    case LandmarkCategory::InitialState:
      return "initial-state";
    case LandmarkCategory::Goal:
      return "goal";
    case LandmarkCategory::NonTrivial:
      return "non-trivial";
  }
  return "?";
}

std::string_view to_string(Extractor e) { return e == Extractor::Exhaustive ? "ex" : "rhw"; }

Extractor parse_extractor(std::string_view s) {
  if (s == "ex" || s == "exhaustive") return Extractor::Exhaustive;
  if (s == "rhw") return Extractor::RHW;
  throw std::invalid_argument("unknown extractor '" + std::string(s) + "'");
}

LandmarkCategory classify(const GroundedProblem& p, const State& goal,
                          const std::vector<FactId>& disjuncts) {
  if (p.initial_state().intersects(disjuncts)) return LandmarkCategory::InitialState;
  if (disjuncts.size() == 1 && goal.contains(disjuncts.front())) return LandmarkCategory::Goal;
  return LandmarkCategory::NonTrivial;
}

bool LandmarkSet::contains(const Landmark& l) const {
  return std::binary_search(landmarks.begin(), landmarks.end(), l);
}

namespace {

ActionMask ban_achievers(const GroundedProblem& p, const std::vector<FactId>& facts) {
  ActionMask banned(p.num_actions(), 0);
  for (FactId f : facts) {
    for (ActionId a : p.achievers(f)) banned[a] = 1;
  }
  return banned;
}

bool goal_reached(const std::vector<char>& reached, const State& goal) {
  return std::all_of(goal.begin(), goal.end(), [&](FactId f) { return reached[f] != 0; });
}

bool verify_with_base(const GroundedProblem& p, const State& goal, FactId f,
                      const std::vector<char>& base) {
  if (p.initial_state().contains(f) || goal.contains(f)) return true;
  // A fact the relaxation never reaches cannot be required, unless the goal
  // itself is unreachable (then every fact is vacuously a landmark).
  if (!base[f] && goal_reached(base, goal)) return false;
  auto reached = relaxed_fixpoint(p, p.initial_state(), ban_achievers(p, {f}));
  return !goal_reached(reached, goal);
}

LandmarkSet make_set(const GroundedProblem& p, const State& goal, Extractor e,
                     const std::vector<std::vector<FactId>>& disjunct_sets) {
  LandmarkSet set;
  set.goal = goal;
  set.extractor = e;
  for (const auto& d : disjunct_sets) {
    set.landmarks.push_back(Landmark{d, classify(p, goal, d)});
  }
  std::sort(set.landmarks.begin(), set.landmarks.end());
  set.landmarks.erase(std::unique(set.landmarks.begin(), set.landmarks.end()),
                      set.landmarks.end());
  return set;
}

LandmarkSet collect_exhaustive(const GroundedProblem& p, const State& goal,
                               const std::vector<char>& is_landmark) {
  std::vector<std::vector<FactId>> found;
  for (FactId f = 0; f < p.num_facts(); ++f) {
    if (is_landmark[f]) found.push_back({f});
  }
  return make_set(p, goal, Extractor::Exhaustive, found);
}

}  // namespace

bool verify_fact_landmark(const GroundedProblem& p, const State& goal, FactId f) {
  auto base = relaxed_fixpoint(p, p.initial_state(), {});
  return verify_with_base(p, goal, f, base);
}

LandmarkSet extract_exhaustive(const GroundedProblem& p, const State& goal) {
  const auto base = relaxed_fixpoint(p, p.initial_state(), {});
  const auto n = static_cast<std::int64_t>(p.num_facts());
  std::vector<char> is_landmark(p.num_facts(), 0);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto f = static_cast<FactId>(i);
    is_landmark[f] = verify_with_base(p, goal, f, base) ? 1 : 0;
  }
  return collect_exhaustive(p, goal, is_landmark);
}

namespace serial {

LandmarkSet extract_exhaustive(const GroundedProblem& p, const State& goal) {
  const auto base = relaxed_fixpoint(p, p.initial_state(), {});
  std::vector<char> is_landmark(p.num_facts(), 0);
  for (FactId f = 0; f < p.num_facts(); ++f) {
    is_landmark[f] = verify_with_base(p, goal, f, base) ? 1 : 0;
  }
  return collect_exhaustive(p, goal, is_landmark);
}

}  // namespace serial

std::vector<ActionId> possible_first_achievers(const GroundedProblem& p,
                                               const std::vector<FactId>& disjuncts) {
  auto reached = relaxed_fixpoint(p, p.initial_state(), ban_achievers(p, disjuncts));
  std::set<ActionId> out;
  for (FactId f : disjuncts) {
    for (ActionId a : p.achievers(f)) {
      const auto& pre = p.action(a).pre;
      if (std::all_of(pre.begin(), pre.end(), [&](FactId q) { return reached[q] != 0; })) {
        out.insert(a);
      }
    }
  }
  return {out.begin(), out.end()};
}

LandmarkSet extract_rhw(const GroundedProblem& p, const State& goal, const RhwOptions& options) {
  const auto base = relaxed_fixpoint(p, p.initial_state(), {});
  std::set<std::vector<FactId>> known;
  std::deque<std::vector<FactId>> open;
  auto discover = [&](std::vector<FactId> d) {
    if (known.insert(d).second) open.push_back(std::move(d));
  };
  for (FactId g : goal) discover({g});

  while (!open.empty()) {
    std::vector<FactId> current = std::move(open.front());
    open.pop_front();
    if (p.initial_state().intersects(current)) continue;

    auto achievers = possible_first_achievers(p, current);
    if (achievers.empty()) continue;

    // Facts shared by the preconditions of every possible first achiever.
    std::vector<FactId> shared = p.action(achievers.front()).pre;
    for (std::size_t i = 1; i < achievers.size() && !shared.empty(); ++i) {
      const auto& pre = p.action(achievers[i]).pre;
      std::vector<FactId> next;
      std::set_intersection(shared.begin(), shared.end(), pre.begin(), pre.end(),
                            std::back_inserter(next));
      shared = std::move(next);
    }
    for (FactId f : shared) {
      if (verify_with_base(p, goal, f, base)) discover({f});
    }

    // One disjunct set per predicate that every achiever requires.
    std::map<std::string, std::set<FactId>> groups;
    std::map<std::string, std::size_t> support;
    for (ActionId a : achievers) {
      std::set<std::string> seen;
      for (FactId f : p.action(a).pre) {
        const auto& pred = p.fact(f).predicate;
        groups[pred].insert(f);
        if (seen.insert(pred).second) ++support[pred];
      }
    }
    for (const auto& [pred, facts] : groups) {
      if (support[pred] != achievers.size()) continue;
      if (facts.size() < 2 || facts.size() > options.max_disjuncts) continue;
      discover({facts.begin(), facts.end()});
    }
  }

  // A disjunction containing a singleton landmark adds nothing.
  std::set<FactId> singletons;
  for (const auto& d : known) {
    if (d.size() == 1) singletons.insert(d.front());
  }
  std::vector<std::vector<FactId>> kept;
  for (const auto& d : known) {
    bool implied = d.size() > 1 && std::any_of(d.begin(), d.end(), [&](FactId f) {
                     return singletons.contains(f);
                   });
    if (!implied) kept.push_back(d);
  }
  return make_set(p, goal, Extractor::RHW, kept);
}

LandmarkSet extract(const GroundedProblem& p, const State& goal, Extractor e) {
  return e == Extractor::Exhaustive ? extract_exhaustive(p, goal) : extract_rhw(p, goal);
}

}  // namespace lmgr
