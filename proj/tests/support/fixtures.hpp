#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lmgr/bundle.hpp"
#include "lmgr/strips.hpp"

namespace lmgr::testing {

// Builds a GroundedProblem from atom strings; actions are given as
// (name-with-args, pre, add, del).
struct ActionSpec {
  std::string call;  // "(move c1 c2)"
  std::vector<std::string> pre, add, del;
  double cost = 1.0;
};

GroundedProblem make_problem(const std::vector<std::string>& facts,
                             const std::vector<std::string>& init,
                             const std::vector<ActionSpec>& actions,
                             const std::vector<std::string>& goal);

FactId id(const GroundedProblem& p, const std::string& atom);
State state(const GroundedProblem& p, const std::vector<std::string>& atoms);
ActionId action(const GroundedProblem& p, const std::string& call);

// Cells c1..c4 in a line, moves in both directions, pre = {(at from)}.
// Start (at c1), goal (at c4).
GroundedProblem corridor();

// Cells a, b, c, d; a-b, a-c, b-d, c-d in both directions. Start (at a),
// goal (at d).
GroundedProblem grid2x2();

// Two goals sharing the corridor c1-c2, branching to c3a-c4a and c3b-c4b.
GroundedProblem forked_corridor();

// PDDL text of the corridor with explicit adjacency facts.
std::string corridor_domain_pddl();
std::string corridor_problem_pddl(int cells = 4);

// Smart-home floor plan: kitchen k1..k4, living room l1 l2, hallway h1..h3,
// bathroom ba1..ba4. Every route from k2 to ba3 passes h3 and ba1.
std::string home_domain_pddl();
std::string home_problem_pddl();

// Random STRIPS problem with at most `max_facts` facts over predicates p/q.
GroundedProblem random_tiny_problem(std::uint64_t seed, std::size_t max_facts = 10);

// Writes a complete bundle directory.
void write_bundle(const std::filesystem::path& dir, const std::string& domain,
                  const std::string& problem_template, const std::vector<std::string>& hyps,
                  const std::string& real_hyp, const std::vector<std::string>& obs);

// A scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace lmgr::testing
