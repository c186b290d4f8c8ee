#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "lmgr/error.hpp"
#include "lmgr/pddl.hpp"

namespace lmgr::pddl {

namespace {

struct Object {
  std::string name;
  std::string type;
};

// Reached facts indexed by predicate, in discovery order (deterministic).
class FactTable {
 public:
  bool insert(const Fact& f) {
    if (!known_.insert(f).second) return false;
    by_predicate_[f.predicate].push_back(f.args);
    return true;
  }
  bool contains(const Fact& f) const { return known_.contains(f); }
  const std::vector<std::vector<std::string>>& with_predicate(const std::string& pred) const {
    static const std::vector<std::vector<std::string>> kEmpty;
    auto it = by_predicate_.find(pred);
    return it == by_predicate_.end() ? kEmpty : it->second;
  }
  const std::set<Fact>& all() const { return known_; }

 private:
  std::set<Fact> known_;
  std::map<std::string, std::vector<std::vector<std::string>>> by_predicate_;
};

class SchemaGrounder {
 public:
  SchemaGrounder(const DomainAST& domain, const ActionSchema& schema,
                 const std::vector<Object>& objects)
      : domain_(domain), schema_(schema) {
    for (std::size_t i = 0; i < schema.params.size(); ++i) {
      var_index_[schema.params[i].name] = i;
      std::vector<std::string> candidates;
      for (const auto& o : objects) {
        if (domain.is_subtype(o.type, schema.params[i].type)) candidates.push_back(o.name);
      }
      domain_of_param_.push_back(std::move(candidates));
    }
  }

  // Calls `emit(binding)` for every binding whose precondition holds in
  // `table` (snapshot taken by the caller).
  template <typename Emit>
  void enumerate(const FactTable& table, Emit&& emit) {
    binding_.assign(schema_.params.size(), std::nullopt);
    match(table, 0, emit);
  }

  Fact instantiate(const Atom& atom, const std::vector<std::string>& args) const {
    Fact f{atom.predicate, {}};
    f.args.reserve(atom.args.size());
    for (const auto& term : atom.args) {
      if (term.front() == '?') {
        f.args.push_back(args[var_index_.at(term)]);
      } else {
        f.args.push_back(term);
      }
    }
    return f;
  }

 private:
  bool allowed(std::size_t param, const std::string& object) const {
    const auto& d = domain_of_param_[param];
    return std::find(d.begin(), d.end(), object) != d.end();
  }

  template <typename Emit>
  void match(const FactTable& table, std::size_t atom_index, Emit& emit) {
    if (atom_index == schema_.precondition.size()) {
      bind_free(0, emit);
      return;
    }
    const Atom& atom = schema_.precondition[atom_index];
    for (const auto& args : table.with_predicate(atom.predicate)) {
      std::vector<std::size_t> newly_bound;
      bool ok = true;
      for (std::size_t k = 0; k < atom.args.size() && ok; ++k) {
        const auto& term = atom.args[k];
        if (term.front() != '?') {
          ok = term == args[k];
          continue;
        }
        std::size_t v = var_index_.at(term);
        if (binding_[v]) {
          ok = *binding_[v] == args[k];
        } else if (allowed(v, args[k])) {
          binding_[v] = args[k];
          newly_bound.push_back(v);
        } else {
          ok = false;
        }
      }
      if (ok) match(table, atom_index + 1, emit);
      for (auto v : newly_bound) binding_[v].reset();
    }
  }

  template <typename Emit>
  void bind_free(std::size_t param, Emit& emit) {
    if (param == binding_.size()) {
      std::vector<std::string> args;
      args.reserve(binding_.size());
      for (const auto& b : binding_) args.push_back(*b);
      emit(std::move(args));
      return;
    }
    if (binding_[param]) {
      bind_free(param + 1, emit);
      return;
    }
    for (const auto& o : domain_of_param_[param]) {
      binding_[param] = o;
      bind_free(param + 1, emit);
    }
    binding_[param].reset();
  }

  const DomainAST& domain_;
  const ActionSchema& schema_;
  std::map<std::string, std::size_t> var_index_;
  std::vector<std::vector<std::string>> domain_of_param_;
  std::vector<std::optional<std::string>> binding_;
};

struct GroundAction {
  std::string name;
  std::vector<std::string> args;
  std::vector<Fact> pre, add, del;
};

}  // namespace

GroundedProblem ground(const DomainAST& domain, const ProblemAST& problem,
                       const std::vector<Fact>& extra_facts, const GroundingOptions& options) {
  std::vector<Object> objects;
  for (const auto& c : domain.constants) objects.push_back({c.name, c.type});
  for (const auto& o : problem.objects) objects.push_back({o.name, o.type});

  for (const auto& f : extra_facts) check_fact(domain, problem, f);

  FactTable reached;
  for (const auto& a : problem.init) reached.insert(Fact{a.predicate, a.args});

  std::vector<SchemaGrounder> grounders;
  grounders.reserve(domain.actions.size());
  for (const auto& schema : domain.actions) grounders.emplace_back(domain, schema, objects);

  // Delete-relaxed fixpoint over schema instantiations.
  std::map<std::pair<std::size_t, std::vector<std::string>>, GroundAction> actions;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < domain.actions.size(); ++s) {
      const ActionSchema& schema = domain.actions[s];
      std::vector<Fact> discovered;
      grounders[s].enumerate(reached, [&](std::vector<std::string> args) {
        auto key = std::make_pair(s, args);
        if (actions.contains(key)) return;
        if (actions.size() >= options.max_actions) {
          throw ResourceError("grounding exceeded the cap of " +
                              std::to_string(options.max_actions) + " actions");
        }
        GroundAction ga{schema.name, args, {}, {}, {}};
        for (const auto& a : schema.precondition) ga.pre.push_back(grounders[s].instantiate(a, args));
        for (const auto& a : schema.add_effects) {
          ga.add.push_back(grounders[s].instantiate(a, args));
          discovered.push_back(ga.add.back());
        }
        for (const auto& a : schema.del_effects) ga.del.push_back(grounders[s].instantiate(a, args));
        actions.emplace(std::move(key), std::move(ga));
      });
      for (const auto& f : discovered) changed |= reached.insert(f);
    }
  }

  std::set<Fact> universe = reached.all();
  std::vector<Fact> forced;
  for (const auto& a : problem.goal) forced.push_back(Fact{a.predicate, a.args});
  forced.insert(forced.end(), extra_facts.begin(), extra_facts.end());
  for (const auto& f : forced) universe.insert(f);

  std::vector<Fact> facts(universe.begin(), universe.end());
  auto id_of = [&](const Fact& f) -> std::optional<FactId> {
    auto it = std::lower_bound(facts.begin(), facts.end(), f);
    if (it == facts.end() || *it != f) return std::nullopt;
    return static_cast<FactId>(it - facts.begin());
  };

  std::vector<FactId> unreachable;
  for (const auto& f : forced) {
    if (!reached.contains(f)) unreachable.push_back(*id_of(f));
  }

  std::vector<Action> grounded;
  grounded.reserve(actions.size());
  for (auto& [key, ga] : actions) {
    Action a;
    a.name = ga.name;
    a.args = ga.args;
    for (const auto& f : ga.pre) a.pre.push_back(*id_of(f));
    for (const auto& f : ga.add) a.add.push_back(*id_of(f));
    // Deletes of facts outside F can never matter.
    for (const auto& f : ga.del) {
      if (auto id = id_of(f)) a.del.push_back(*id);
    }
    grounded.push_back(std::move(a));
  }

  std::vector<FactId> init;
  for (const auto& a : problem.init) init.push_back(*id_of(Fact{a.predicate, a.args}));
  std::vector<FactId> goal;
  for (const auto& a : problem.goal) goal.push_back(*id_of(Fact{a.predicate, a.args}));

  GroundedProblem result(std::move(facts), std::move(init), std::move(grounded), std::move(goal));
  result.set_relaxed_unreachable_facts(std::move(unreachable));
  return result;
}

}  // namespace lmgr::pddl
