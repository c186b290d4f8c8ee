#include "lmgr/strips.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

#include "lmgr/error.hpp"

namespace lmgr {

namespace {

void sort_unique(std::vector<FactId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string join_atom(const std::string& head, const std::vector<std::string>& args) {
  std::string out = "(" + head;
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  out += ')';
  return out;
}

}  // namespace

std::string Fact::to_string() const { return join_atom(predicate, args); }

std::string Action::to_string() const { return join_atom(name, args); }

Fact parse_fact(std::string_view text) {
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  auto first = lowered.find_first_not_of(" \t\r\n");
  auto last = lowered.find_last_not_of(" \t\r\n");
  if (first == std::string::npos || lowered[first] != '(' || lowered[last] != ')') {
    throw ParseError("expected a parenthesized atom, got '" + std::string(text) + "'");
  }
  std::string body = lowered.substr(first + 1, last - first - 1);
  if (body.find_first_of("()") != std::string::npos) {
    throw ParseError("nested parentheses in atom '" + std::string(text) + "'");
  }
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    std::size_t j = i;
    while (j < body.size() && !std::isspace(static_cast<unsigned char>(body[j]))) ++j;
    if (j > i) tokens.emplace_back(body.substr(i, j - i));
    i = j;
  }
  if (tokens.empty()) throw ParseError("empty atom '" + std::string(text) + "'");
  Fact f;
  f.predicate = tokens.front();
  f.args.assign(tokens.begin() + 1, tokens.end());
  return f;
}

State::State(std::initializer_list<FactId> ids) : ids_(ids) { sort_unique(ids_); }

State::State(std::vector<FactId> ids) : ids_(std::move(ids)) { sort_unique(ids_); }

bool State::contains(FactId f) const { return std::binary_search(ids_.begin(), ids_.end(), f); }

void State::insert(FactId f) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), f);
  if (it == ids_.end() || *it != f) ids_.insert(it, f);
}

void State::erase(FactId f) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), f);
  if (it != ids_.end() && *it == f) ids_.erase(it);
}

bool State::subset_of(const State& other) const {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

bool State::intersects(std::span<const FactId> facts) const {
  return std::any_of(facts.begin(), facts.end(), [this](FactId f) { return contains(f); });
}

GroundedProblem::GroundedProblem(std::vector<Fact> facts, std::vector<FactId> initial,
                                 std::vector<Action> actions, std::vector<FactId> goal) {
  // Interning: sort the distinct facts and build old-id -> new-id.
  std::vector<FactId> order(facts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](FactId a, FactId b) { return facts[a] < facts[b]; });
  std::vector<FactId> remap(facts.size());
  for (FactId pos = 0; pos < order.size(); ++pos) {
    const Fact& f = facts[order[pos]];
    if (facts_.empty() || facts_.back() != f) {
      fact_index_.emplace(f, static_cast<FactId>(facts_.size()));
      facts_.push_back(f);
    }
    remap[order[pos]] = static_cast<FactId>(facts_.size() - 1);
  }

  auto translate = [&](std::vector<FactId> ids, const char* where) {
    for (auto& id : ids) {
      if (id >= remap.size()) {
        throw SemanticError(std::string("fact id out of range in ") + where);
      }
      id = remap[id];
    }
    sort_unique(ids);
    return ids;
  };

  initial_ = State(translate(std::move(initial), "initial state"));
  goal_ = State(translate(std::move(goal), "goal"));

  for (auto& a : actions) {
    if (a.cost < 0) throw SemanticError("negative cost for action " + a.to_string());
    a.pre = translate(std::move(a.pre), "precondition");
    a.add = translate(std::move(a.add), "add list");
    a.del = translate(std::move(a.del), "delete list");
  }
  std::stable_sort(actions.begin(), actions.end(), [](const Action& x, const Action& y) {
    return std::tie(x.name, x.args) < std::tie(y.name, y.args);
  });
  actions_ = std::move(actions);

  achievers_.assign(facts_.size(), {});
  consumers_.assign(facts_.size(), {});
  for (ActionId id = 0; id < actions_.size(); ++id) {
    for (FactId f : actions_[id].add) achievers_[f].push_back(id);
    for (FactId f : actions_[id].pre) consumers_[f].push_back(id);
  }
}

std::optional<FactId> GroundedProblem::find_fact(const Fact& f) const {
  auto it = fact_index_.find(f);
  if (it == fact_index_.end()) return std::nullopt;
  return it->second;
}

FactId GroundedProblem::fact_id(const Fact& f) const {
  if (auto id = find_fact(f)) return *id;
  throw SemanticError("fact " + f.to_string() + " is not part of the problem");
}

State GroundedProblem::make_state(std::span<const Fact> facts) const {
  std::vector<FactId> ids;
  ids.reserve(facts.size());
  for (const auto& f : facts) ids.push_back(fact_id(f));
  return State(std::move(ids));
}

std::optional<ActionId> GroundedProblem::find_action(std::string_view name,
                                                     std::span<const std::string> args) const {
  auto it = std::lower_bound(actions_.begin(), actions_.end(), std::pair(name, args),
                             [](const Action& a, const auto& key) {
                               if (a.name != key.first) return a.name < key.first;
                               return std::lexicographical_compare(a.args.begin(), a.args.end(),
                                                                   key.second.begin(),
                                                                   key.second.end());
                             });
  if (it == actions_.end() || it->name != name ||
      !std::equal(it->args.begin(), it->args.end(), args.begin(), args.end())) {
    return std::nullopt;
  }
  return static_cast<ActionId>(it - actions_.begin());
}

void GroundedProblem::set_relaxed_unreachable_facts(std::vector<FactId> facts) {
  sort_unique(facts);
  unreachable_ = std::move(facts);
}

std::string GroundedProblem::state_string(const State& s) const {
  std::string out = "{";
  bool first = true;
  for (FactId f : s) {
    if (!first) out += ", ";
    out += fact_string(f);
    first = false;
  }
  return out + "}";
}

bool applicable(const State& s, const Action& a) {
  return std::all_of(a.pre.begin(), a.pre.end(), [&](FactId f) { return s.contains(f); });
}

State apply(const State& s, const Action& a) {
  if (!applicable(s, a)) {
    throw std::invalid_argument("action " + a.to_string() + " is not applicable");
  }
  std::vector<FactId> kept;
  kept.reserve(s.size() + a.add.size());
  std::set_difference(s.begin(), s.end(), a.del.begin(), a.del.end(), std::back_inserter(kept));
  kept.insert(kept.end(), a.add.begin(), a.add.end());
  return State(std::move(kept));
}

PlanReport validate_plan(const GroundedProblem& p, const Plan& plan) {
  return validate_plan(p, plan, p.goal());
}

PlanReport validate_plan(const GroundedProblem& p, const Plan& plan, const State& goal) {
  PlanReport report;
  report.trace.reserve(plan.size() + 1);
  report.trace.push_back(p.initial_state());
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const Action& a = p.action(plan[i]);
    if (!applicable(report.trace.back(), a)) {
      report.failing_step = i;
      return report;
    }
    report.trace.push_back(apply(report.trace.back(), a));
    report.cost += a.cost;
  }
  report.valid = goal.subset_of(report.trace.back());
  return report;
}

}  // namespace lmgr
