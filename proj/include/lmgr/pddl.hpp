#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lmgr/strips.hpp"

namespace lmgr::pddl {

// Diagnostics only: two AST nodes compare equal regardless of where they were
// parsed from, so printed-and-reparsed trees compare equal to the original.
struct SourcePos {
  int line = 0;
  int column = 0;
  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

struct TypedName {
  std::string name;
  std::string type = "object";
  bool operator==(const TypedName&) const = default;
};

// An atom whose arguments are variables ("?x") or constants.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;
  SourcePos pos;
  bool operator==(const Atom&) const = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;
  bool operator==(const PredicateDecl&) const = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Atom> precondition;
  std::vector<Atom> add_effects;
  std::vector<Atom> del_effects;
  SourcePos pos;
  bool operator==(const ActionSchema&) const = default;
};

struct DomainAST {
  std::string name;
  std::vector<std::string> requirements;
  // (type, parent) in declaration order; "object" is implicit.
  std::vector<TypedName> types;
  std::vector<TypedName> constants;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;
  bool operator==(const DomainAST&) const = default;

  const PredicateDecl* find_predicate(std::string_view name) const;
  // True if `type` equals `ancestor` or inherits from it.
  bool is_subtype(std::string_view type, std::string_view ancestor) const;
  bool has_type(std::string_view type) const;
};

struct ProblemAST {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::vector<Atom> goal;
  bool operator==(const ProblemAST&) const = default;
};

// Throws ParseError (with line/column), UnsupportedFeature (naming the
// requirement or construct) or SemanticError.
DomainAST parse_domain(std::string_view text);
ProblemAST parse_problem(std::string_view text, const DomainAST& domain);

std::string to_pddl(const DomainAST& domain);
std::string to_pddl(const ProblemAST& problem);

struct GroundingOptions {
  std::size_t max_actions = 1'000'000;
};

// Instantiates the schemas over type-compatible objects, keeping only actions
// reachable from the initial state under the delete relaxation.
// F = relaxed-reachable facts ∪ init ∪ goal ∪ `extra_facts`; extra facts (e.g.
// candidate goals) must use declared predicates and objects. Throws
// ResourceError when more than `max_actions` actions are produced.
GroundedProblem ground(const DomainAST& domain, const ProblemAST& problem,
                       const std::vector<Fact>& extra_facts = {},
                       const GroundingOptions& options = {});

// Checks a ground atom against the declarations. Throws SemanticError.
void check_fact(const DomainAST& domain, const ProblemAST& problem, const Fact& fact);

}  // namespace lmgr::pddl
