#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "lmgr/landmarks.hpp"
#include "lmgr/strips.hpp"

namespace lmgr {

enum class VariantKind { Random, Longest, Shortest };

struct DatasetVariant {
  VariantKind kind = VariantKind::Random;
  std::uint64_t seed = 0;
};

// "D_R" / "D_L" / "D_S"
std::string_view variant_label(VariantKind k);
// Accepts random|longest|shortest, r|l|s and the D_* labels.
VariantKind parse_variant(std::string_view s);

std::uint64_t splitmix64(std::uint64_t x);
// Unbiased draw from [0, n) that does not depend on the standard library's
// distribution implementation.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

struct GoalMutation {
  std::vector<State> goals;
  // Goals kept as they were because no acceptable subset was found.
  std::vector<std::size_t> unmodified;
};

// Replaces each goal by a random nonempty subset of its facts (size uniform
// in [1, |g|]) such that no goal is a subset of another. Requires at least two
// goals (std::invalid_argument otherwise).
GoalMutation mutate_goal_set(const std::vector<State>& goals, std::uint64_t seed,
                             std::size_t max_retries = 1000);

// True if no goal is a subset of (or equal to) another.
bool pairwise_non_subset(const std::vector<State>& goals);

// Longest/Shortest break ties by the smaller goal in canonical fact order.
std::size_t select_true_goal(const std::vector<State>& goals, VariantKind kind, std::uint64_t seed);

struct PlannerOptions {
  std::size_t node_cap = 1'000'000;
};

// Greedy best-first search on h_add; successor ties are broken by a seeded
// random key. Throws UnsolvableError if the search space is exhausted and
// ResourceError if the node cap is hit. The returned plan is validated.
Plan plan_observations(const GroundedProblem& p, const State& goal, std::uint64_t seed,
                       const PlannerOptions& options = {});

struct OracleOptions {
  std::size_t state_cap = 100'000;
  std::size_t path_cap = 20'000'000;
};

// Brute-force landmark oracle: enumerates every acyclic plan (a path in the
// explicit state space that stops at its first goal state) and records the
// facts each trace visits. Refuses with ResourceError when the reachable state
// space exceeds `state_cap` or enumeration exceeds `path_cap` steps; throws
// UnsolvableError when no plan exists.
class LandmarkOracle {
 public:
  LandmarkOracle(const GroundedProblem& p, const State& goal, const OracleOptions& options = {});

  // Facts present in every plan trace, as singleton landmarks.
  LandmarkSet landmarks() const;
  // Every plan trace contains at least one of `disjuncts`.
  bool confirms(const std::vector<FactId>& disjuncts) const;
  bool confirms(const Landmark& l) const { return confirms(l.disjuncts); }

  std::size_t reachable_states() const { return reachable_states_; }
  std::size_t plan_count() const { return plan_count_; }
  std::size_t distinct_traces() const { return traces_.size(); }

 private:
  const GroundedProblem* problem_;
  State goal_;
  std::vector<std::vector<std::uint64_t>> traces_;  // fact bitsets, sorted unique
  std::size_t reachable_states_ = 0;
  std::size_t plan_count_ = 0;
};

LandmarkSet oracle_landmarks(const GroundedProblem& p, const State& goal,
                             std::size_t state_cap = 100'000);

struct VariantReport {
  std::vector<std::size_t> original_goal_sizes;
  std::vector<std::size_t> goal_sizes;
  std::vector<std::size_t> unmodified_goals;
  std::size_t true_goal = 0;
  std::size_t plan_length = 0;
};

// Reads the bundle at `source`, mutates its hypotheses, picks the true goal
// for `variant`, plans the observations and writes a complete bundle to
// `target` (domain.pddl, template.pddl, hyps.dat, real_hyp.dat, obs.dat,
// meta.json).
VariantReport write_variant_bundle(const std::filesystem::path& source,
                                   const std::filesystem::path& target,
                                   const DatasetVariant& variant,
                                   const PlannerOptions& planner = {});

}  // namespace lmgr
