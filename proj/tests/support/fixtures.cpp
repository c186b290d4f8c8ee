#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <set>
#include <stdexcept>
#include <unistd.h>

#include "lmgr/bench_tools.hpp"

namespace lmgr::testing {

namespace fs = std::filesystem;

GroundedProblem make_problem(const std::vector<std::string>& facts,
                             const std::vector<std::string>& init,
                             const std::vector<ActionSpec>& actions,
                             const std::vector<std::string>& goal) {
  std::vector<Fact> parsed;
  for (const auto& f : facts) parsed.push_back(parse_fact(f));
  auto index = [&](const std::string& atom) {
    Fact f = parse_fact(atom);
    auto it = std::find(parsed.begin(), parsed.end(), f);
    if (it == parsed.end()) throw std::invalid_argument("fixture uses undeclared fact " + atom);
    return static_cast<FactId>(it - parsed.begin());
  };
  auto ids = [&](const std::vector<std::string>& atoms) {
    std::vector<FactId> out;
    for (const auto& a : atoms) out.push_back(index(a));
    return out;
  };
  std::vector<Action> grounded;
  for (const auto& spec : actions) {
    Fact call = parse_fact(spec.call);
    Action a;
    a.name = call.predicate;
    a.args = call.args;
    a.pre = ids(spec.pre);
    a.add = ids(spec.add);
    a.del = ids(spec.del);
    a.cost = spec.cost;
    grounded.push_back(std::move(a));
  }
  return GroundedProblem(parsed, ids(init), grounded, ids(goal));
}

FactId id(const GroundedProblem& p, const std::string& atom) { return p.fact_id(parse_fact(atom)); }

State state(const GroundedProblem& p, const std::vector<std::string>& atoms) {
  std::vector<FactId> out;
  for (const auto& a : atoms) out.push_back(id(p, a));
  return State(std::move(out));
}

ActionId action(const GroundedProblem& p, const std::string& call) {
  Fact f = parse_fact(call);
  auto a = p.find_action(f.predicate, f.args);
  if (!a) throw std::invalid_argument("fixture has no action " + call);
  return *a;
}

namespace {

std::vector<ActionSpec> moves(const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<ActionSpec> out;
  for (const auto& [x, y] : edges) {
    out.push_back({"(move " + x + " " + y + ")", {"(at " + x + ")"}, {"(at " + y + ")"},
                   {"(at " + x + ")"}});
    out.push_back({"(move " + y + " " + x + ")", {"(at " + y + ")"}, {"(at " + x + ")"},
                   {"(at " + y + ")"}});
  }
  return out;
}

}  // namespace

GroundedProblem corridor() {
  return make_problem({"(at c1)", "(at c2)", "(at c3)", "(at c4)"}, {"(at c1)"},
                      moves({{"c1", "c2"}, {"c2", "c3"}, {"c3", "c4"}}), {"(at c4)"});
}

GroundedProblem grid2x2() {
  return make_problem({"(at a)", "(at b)", "(at c)", "(at d)"}, {"(at a)"},
                      moves({{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}}), {"(at d)"});
}

GroundedProblem forked_corridor() {
  return make_problem(
      {"(at c1)", "(at c2)", "(at c3a)", "(at c4a)", "(at c3b)", "(at c4b)"}, {"(at c1)"},
      moves({{"c1", "c2"}, {"c2", "c3a"}, {"c3a", "c4a"}, {"c2", "c3b"}, {"c3b", "c4b"}}), {});
}

std::string corridor_domain_pddl() {
  return R"(; one agent walking along a line of cells
(define (domain corridor)
  (:requirements :strips :typing)
  (:types cell)
  (:predicates (at ?c - cell) (adj ?a ?b - cell))
  (:action move
    :parameters (?from ?to - cell)
    :precondition (and (at ?from) (adj ?from ?to))
    :effect (and (at ?to) (not (at ?from)))))
)";
}

std::string corridor_problem_pddl(int cells) {
  std::string objects;
  std::string adj;
  for (int i = 1; i <= cells; ++i) {
    objects += " c" + std::to_string(i);
    if (i < cells) {
      adj += " (adj c" + std::to_string(i) + " c" + std::to_string(i + 1) + ")";
      adj += " (adj c" + std::to_string(i + 1) + " c" + std::to_string(i) + ")";
    }
  }
  return "(define (problem corridor-" + std::to_string(cells) + ")\n  (:domain corridor)\n" +
         "  (:objects" + objects + " - cell)\n  (:init (at c1)" + adj + ")\n" +
         "  (:goal (and (at c" + std::to_string(cells) + "))))\n";
}

std::string home_domain_pddl() {
  return R"((define (domain smart-home)
  (:requirements :strips :typing)
  (:types cell)
  (:predicates (is-at ?c - cell) (adjacent ?a ?b - cell))
  (:action move
    :parameters (?from ?to - cell)
    :precondition (and (is-at ?from) (adjacent ?from ?to))
    :effect (and (is-at ?to) (not (is-at ?from)))))
)";
}

std::string home_problem_pddl() {
  const std::vector<std::pair<std::string, std::string>> doors = {
      // kitchen, 2x2
      {"k1", "k2"}, {"k3", "k4"}, {"k1", "k3"}, {"k2", "k4"},
      // kitchen -> hallway, kitchen -> living room
      {"k3", "h1"}, {"k4", "l1"},
      // living room -> hallway
      {"l1", "l2"}, {"l2", "h2"},
      // hallway; h3 is the only way into the bathroom
      {"h1", "h2"}, {"h1", "h3"}, {"h2", "h3"},
      {"h3", "ba1"},
      // bathroom, 2x2
      {"ba1", "ba2"}, {"ba1", "ba3"}, {"ba2", "ba4"}, {"ba3", "ba4"}};
  std::string init = "(is-at k2)";
  for (const auto& [a, b] : doors) {
    init += " (adjacent " + a + " " + b + ") (adjacent " + b + " " + a + ")";
  }
  return "(define (problem home-1)\n  (:domain smart-home)\n"
         "  (:objects k1 k2 k3 k4 l1 l2 h1 h2 h3 ba1 ba2 ba3 ba4 - cell)\n"
         "  (:init " + init + ")\n  (:goal (and (is-at ba3))))\n";
}

GroundedProblem random_tiny_problem(std::uint64_t seed, std::size_t max_facts) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return uniform_index(rng, n); };
  const std::size_t n = 5 + pick(std::max<std::size_t>(max_facts, 5) - 4);
  std::vector<std::string> facts;
  for (std::size_t i = 0; i < n; ++i) {
    facts.push_back(std::string(pick(2) == 0 ? "(p o" : "(q o") + std::to_string(i) + ")");
  }
  auto sample = [&](std::size_t lo, std::size_t hi, const std::set<std::size_t>& avoid) {
    std::size_t k = lo + pick(hi - lo + 1);
    std::set<std::size_t> chosen;
    for (std::size_t tries = 0; chosen.size() < k && tries < 50; ++tries) {
      std::size_t f = pick(n);
      if (!avoid.contains(f)) chosen.insert(f);
    }
    return chosen;
  };
  auto atoms = [&](const std::set<std::size_t>& s) {
    std::vector<std::string> out;
    for (auto i : s) out.push_back(facts[i]);
    return out;
  };

  std::vector<ActionSpec> actions;
  const std::size_t m = 3 + pick(8);
  for (std::size_t a = 0; a < m; ++a) {
    auto pre = sample(0, 2, {});
    auto add = sample(1, 2, pre);
    std::set<std::size_t> del;
    for (auto f : pre) {
      if (pick(2) == 0) del.insert(f);
    }
    actions.push_back({"(act" + std::to_string(a) + ")", atoms(pre), atoms(add), atoms(del)});
  }
  auto init = sample(1, 2, {});
  auto goal = sample(1, 2, init);
  return make_problem(facts, atoms(init), actions, atoms(goal));
}

void write_bundle(const fs::path& dir, const std::string& domain,
                  const std::string& problem_template, const std::vector<std::string>& hyps,
                  const std::string& real_hyp, const std::vector<std::string>& obs) {
  fs::create_directories(dir);
  write_text_file(dir / "domain.pddl", domain);
  write_text_file(dir / "template.pddl", problem_template);
  std::string h;
  for (const auto& line : hyps) h += line + "\n";
  write_text_file(dir / "hyps.dat", h);
  write_text_file(dir / "real_hyp.dat", real_hyp + "\n");
  std::string o;
  for (const auto& line : obs) o += line + "\n";
  write_text_file(dir / "obs.dat", o);
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("lmgr-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

}  // namespace lmgr::testing
