#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lmgr/strips.hpp"

namespace lmgr {

enum class LandmarkCategory { InitialState, Goal, NonTrivial };
enum class Extractor { Exhaustive, RHW };

std::string_view to_string(LandmarkCategory c);
std::string_view to_string(Extractor e);
// "ex"/"exhaustive" or "rhw". Throws std::invalid_argument.
Extractor parse_extractor(std::string_view s);

// A disjunctive fact landmark. Two landmarks are equal iff their disjunct sets
// are equal; the category is derived from the problem and the goal.
struct Landmark {
  std::vector<FactId> disjuncts;  // sorted, unique, nonempty
  LandmarkCategory category = LandmarkCategory::NonTrivial;

  bool is_singleton() const { return disjuncts.size() == 1; }
  bool operator==(const Landmark& o) const { return disjuncts == o.disjuncts; }
  auto operator<=>(const Landmark& o) const { return disjuncts <=> o.disjuncts; }
};

// InitialState if some disjunct holds in s0; otherwise Goal if it is a
// singleton goal fact; otherwise NonTrivial.
LandmarkCategory classify(const GroundedProblem& p, const State& goal,
                          const std::vector<FactId>& disjuncts);

struct LandmarkSet {
  State goal;
  std::vector<Landmark> landmarks;  // sorted by disjuncts, no duplicates
  Extractor extractor = Extractor::Exhaustive;

  std::size_t size() const { return landmarks.size(); }
  bool contains(const Landmark& l) const;
};

// True for trivial landmarks (f in s0 or in goal); otherwise true iff the goal
// is not relaxed-reachable once every achiever of f is banned.
bool verify_fact_landmark(const GroundedProblem& p, const State& goal, FactId f);

// Singleton landmarks for every fact passing verify_fact_landmark. The
// per-fact checks run in parallel (OpenMP); see serial::extract_exhaustive.
LandmarkSet extract_exhaustive(const GroundedProblem& p, const State& goal);

struct RhwOptions {
  std::size_t max_disjuncts = 4;
};

// Back-chaining from the goal over possible first achievers, producing
// singleton and disjunctive (same-predicate) landmarks.
LandmarkSet extract_rhw(const GroundedProblem& p, const State& goal, const RhwOptions& options = {});

LandmarkSet extract(const GroundedProblem& p, const State& goal, Extractor e);

// Actions that add some fact of `disjuncts` and whose precondition is
// relaxed-reachable without ever making any disjunct true.
std::vector<ActionId> possible_first_achievers(const GroundedProblem& p,
                                               const std::vector<FactId>& disjuncts);

namespace serial {

// Single-threaded reference for extract_exhaustive; output is identical.
LandmarkSet extract_exhaustive(const GroundedProblem& p, const State& goal);

}  // namespace serial

}  // namespace lmgr
