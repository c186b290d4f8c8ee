#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "lmgr/strips.hpp"

namespace lmgr {

// Per-action flag; empty means "nothing banned".
using ActionMask = std::vector<char>;

// Layered delete-relaxed reachability from a start state, built to fixpoint.
// Level of a fact = first layer containing it; level of an action = first
// layer whose facts satisfy its precondition.
class RelaxedPlanningGraph {
 public:
  static constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

  RelaxedPlanningGraph(const GroundedProblem& p, const State& start, const ActionMask& banned);

  // Number of fact layers (F0 .. F{n-1}); F{n-1} is the fixpoint.
  std::size_t num_layers() const { return num_layers_; }
  std::uint32_t fact_level(FactId f) const { return fact_level_[f]; }
  std::uint32_t action_level(ActionId a) const { return action_level_[a]; }
  bool reached(FactId f) const { return fact_level_[f] != kUnreached; }

  // Facts with level <= i.
  State layer(std::size_t i) const;
  State fixpoint() const;
  // Actions usable at layer i (level <= i).
  std::vector<ActionId> applicable_actions(std::size_t i) const;

  // Achievers of f whose precondition is satisfied one layer before f first
  // appears.
  std::vector<ActionId> first_achievers(FactId f) const;

 private:
  const GroundedProblem* problem_;
  std::vector<std::uint32_t> fact_level_;
  std::vector<std::uint32_t> action_level_;
  std::size_t num_layers_ = 0;
};

RelaxedPlanningGraph build_rpg(const GroundedProblem& p, const ActionMask& banned = {});

// goal ⊆ fixpoint
bool relaxed_reachable(const RelaxedPlanningGraph& rpg, const State& goal);

// Compact fixpoint-only reachability (no layering). Same answer as
// build_rpg + relaxed_reachable, cheaper; used in the landmark kernels.
std::vector<char> relaxed_fixpoint(const GroundedProblem& p, const State& start,
                                   const ActionMask& banned);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Additive delete-relaxation estimate of reaching `goal` from `s`.
double h_add(const GroundedProblem& p, const State& s, const State& goal);

}  // namespace lmgr
