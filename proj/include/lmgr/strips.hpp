#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lmgr {

using FactId = std::uint32_t;
using ActionId = std::uint32_t;

// A ground atom. Ordered lexicographically by predicate, then arguments; this
// order is also the id order inside a GroundedProblem.
struct Fact {
  std::string predicate;
  std::vector<std::string> args;

  auto operator<=>(const Fact&) const = default;
  bool operator==(const Fact&) const = default;

  // "(pred a b)"
  std::string to_string() const;
};

// Parses a single ground atom "(pred a b)". Symbols are lower-cased.
Fact parse_fact(std::string_view text);

// A set of fact ids, kept sorted and unique so that equality, ordering and
// iteration never depend on insertion order.
class State {
 public:
  State() = default;
  State(std::initializer_list<FactId> ids);
  explicit State(std::vector<FactId> ids);

  bool contains(FactId f) const;
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  void insert(FactId f);
  void erase(FactId f);

  // this ⊆ other
  bool subset_of(const State& other) const;
  bool intersects(std::span<const FactId> facts) const;

  std::span<const FactId> ids() const { return ids_; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  auto operator<=>(const State&) const = default;
  bool operator==(const State&) const = default;

 private:
  std::vector<FactId> ids_;
};

// Every fact list is sorted and unique.
struct Action {
  std::string name;
  std::vector<std::string> args;
  std::vector<FactId> pre;
  std::vector<FactId> add;
  std::vector<FactId> del;
  double cost = 1.0;

  // "(name a b)"
  std::string to_string() const;
};

using Plan = std::vector<ActionId>;

// Facts are interned to dense ids in lexicographic order; actions are ordered
// by (name, args). Immutable after construction.
class GroundedProblem {
 public:
  GroundedProblem() = default;

  // `facts` may be given in any order and with duplicates; fact ids used by
  // `initial`, `goal` and the actions refer to positions in `facts` and are
  // remapped. Throws SemanticError on out-of-range ids or negative costs.
  GroundedProblem(std::vector<Fact> facts, std::vector<FactId> initial, std::vector<Action> actions,
                  std::vector<FactId> goal);

  std::size_t num_facts() const { return facts_.size(); }
  std::size_t num_actions() const { return actions_.size(); }

  std::span<const Fact> facts() const { return facts_; }
  const Fact& fact(FactId f) const { return facts_.at(f); }
  std::span<const Action> actions() const { return actions_; }
  const Action& action(ActionId a) const { return actions_.at(a); }

  const State& initial_state() const { return initial_; }
  const State& goal() const { return goal_; }

  std::optional<FactId> find_fact(const Fact& f) const;
  // Throws SemanticError if the fact is not part of F.
  FactId fact_id(const Fact& f) const;
  State make_state(std::span<const Fact> facts) const;

  std::optional<ActionId> find_action(std::string_view name, std::span<const std::string> args) const;

  // Actions whose add list contains f.
  std::span<const ActionId> achievers(FactId f) const { return achievers_.at(f); }
  // Actions whose precondition contains f.
  std::span<const ActionId> consumers(FactId f) const { return consumers_.at(f); }

  // Goal facts that the grounder had to keep even though the delete
  // relaxation cannot reach them.
  std::span<const FactId> relaxed_unreachable_facts() const { return unreachable_; }
  void set_relaxed_unreachable_facts(std::vector<FactId> facts);

  std::string fact_string(FactId f) const { return fact(f).to_string(); }
  std::string state_string(const State& s) const;

 private:
  std::vector<Fact> facts_;
  std::map<Fact, FactId> fact_index_;
  State initial_;
  State goal_;
  std::vector<Action> actions_;
  std::vector<std::vector<ActionId>> achievers_;
  std::vector<std::vector<ActionId>> consumers_;
  std::vector<FactId> unreachable_;
};

bool applicable(const State& s, const Action& a);

// (s \ Del(a)) ∪ Add(a). Throws std::invalid_argument if `a` is not applicable.
State apply(const State& s, const Action& a);

struct PlanReport {
  bool valid = false;
  // Index of the first inapplicable step, if any.
  std::optional<std::size_t> failing_step;
  double cost = 0.0;
  // s0, s1, ... up to the last state reached.
  std::vector<State> trace;
};

PlanReport validate_plan(const GroundedProblem& p, const Plan& plan);
PlanReport validate_plan(const GroundedProblem& p, const Plan& plan, const State& goal);

}  // namespace lmgr
