#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "lmgr/error.hpp"
#include "lmgr/pddl.hpp"

namespace lmgr::pddl {

namespace {

struct Node {
  bool is_list = false;
  std::string atom;
  std::vector<Node> items;
  SourcePos pos;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Node read_document() {
    skip_space();
    if (at_end()) throw ParseError("empty input", line_, column_);
    Node root = read_node();
    skip_space();
    if (!at_end()) throw ParseError("trailing input after top-level form", line_, column_);
    return root;
  }

 private:
  bool at_end() const { return offset_ >= text_.size(); }
  char peek() const { return text_[offset_]; }

  void advance() {
    if (text_[offset_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++offset_;
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Node read_node() {
    Node node;
    node.pos = {line_, column_};
    if (peek() == ')') throw ParseError("unexpected ')'", line_, column_);
    if (peek() == '(') {
      node.is_list = true;
      advance();
      while (true) {
        skip_space();
        if (at_end()) throw ParseError("unterminated list opened", node.pos.line, node.pos.column);
        if (peek() == ')') {
          advance();
          break;
        }
        node.items.push_back(read_node());
      }
      return node;
    }
    while (!at_end()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';') break;
      node.atom += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::size_t offset_ = 0;
  int line_ = 1;
  int column_ = 1;
};

[[noreturn]] void fail(const std::string& what, const Node& at) {
  throw ParseError(what, at.pos.line, at.pos.column);
}

const std::string& expect_atom(const Node& n, const char* what) {
  if (n.is_list) fail(std::string("expected ") + what + ", found a list", n);
  return n.atom;
}

const Node& expect_list(const Node& n, const char* what) {
  if (!n.is_list) fail(std::string("expected ") + what + ", found '" + n.atom + "'", n);
  return n;
}

bool is_keyword(const Node& n, std::string_view kw) { return !n.is_list && n.atom == kw; }

bool head_is(const Node& n, std::string_view kw) {
  return n.is_list && !n.items.empty() && is_keyword(n.items.front(), kw);
}

const std::set<std::string, std::less<>> kSupportedRequirements = {":strips", ":typing"};

void check_requirements(const Node& section, std::vector<std::string>& out) {
  for (std::size_t i = 1; i < section.items.size(); ++i) {
    const auto& req = expect_atom(section.items[i], "requirement");
    if (!kSupportedRequirements.contains(req)) {
      throw UnsupportedFeature("unsupported requirement " + req + " (only :strips and :typing)");
    }
    out.push_back(req);
  }
}

// "a b - t c" -> [(a,t),(b,t),(c,object)]
std::vector<TypedName> parse_typed_list(const std::vector<Node>& items, std::size_t begin,
                                        bool variables) {
  std::vector<TypedName> out;
  std::vector<std::string> pending;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const Node& n = items[i];
    if (n.is_list) {
      if (head_is(n, "either")) throw UnsupportedFeature("'either' types are not supported");
      fail("unexpected list in typed list", n);
    }
    if (n.atom == "-") {
      if (i + 1 >= items.size()) fail("missing type after '-'", n);
      const Node& t = items[i + 1];
      if (t.is_list) {
        if (head_is(t, "either")) throw UnsupportedFeature("'either' types are not supported");
        fail("expected a type name", t);
      }
      if (pending.empty()) fail("type given without names", n);
      for (auto& p : pending) out.push_back({std::move(p), t.atom});
      pending.clear();
      ++i;
      continue;
    }
    if (variables && n.atom.front() != '?') fail("expected a variable, found '" + n.atom + "'", n);
    if (!variables && n.atom.front() == '?') fail("unexpected variable '" + n.atom + "'", n);
    pending.push_back(n.atom);
  }
  for (auto& p : pending) out.push_back({std::move(p), "object"});
  return out;
}

Atom parse_atom(const Node& n) {
  expect_list(n, "an atom");
  if (n.items.empty()) fail("empty atom", n);
  Atom atom;
  atom.pos = n.pos;
  atom.predicate = expect_atom(n.items.front(), "a predicate name");
  for (std::size_t i = 1; i < n.items.size(); ++i) {
    atom.args.push_back(expect_atom(n.items[i], "a term"));
  }
  return atom;
}

const std::set<std::string, std::less<>> kUnsupportedConnectives = {
    "or", "imply", "exists", "forall", "when", "=", "increase", "decrease", "assign",
    "scale-up", "scale-down", "preference"};

// (at start ...), (at end ...), (over all ...); a plain (at x y) is an atom.
bool is_timed_condition(const Node& n) {
  const auto& head = n.items.front().atom;
  if (head != "at" && head != "over") return false;
  if (n.items.size() < 2 || n.items[1].is_list) return false;
  const auto& when = n.items[1].atom;
  return when == "start" || when == "end" || when == "all";
}

void reject_connective(const Node& n, const char* where) {
  const auto& head = n.items.front().atom;
  if (head == "not") {
    throw UnsupportedFeature(std::string("negative literal in ") + where +
                             " (requires :negative-preconditions)");
  }
  if (kUnsupportedConnectives.contains(head) || is_timed_condition(n)) {
    throw UnsupportedFeature("'" + head + "' in " + where + " is not supported");
  }
}

// Flattens a conjunction of positive atoms.
void parse_condition(const Node& n, std::vector<Atom>& out) {
  expect_list(n, "a condition");
  if (n.items.empty()) return;
  if (n.items.front().is_list) fail("expected a connective or predicate", n);
  if (head_is(n, "and")) {
    for (std::size_t i = 1; i < n.items.size(); ++i) parse_condition(n.items[i], out);
    return;
  }
  reject_connective(n, "condition");
  out.push_back(parse_atom(n));
}

void parse_effect(const Node& n, std::vector<Atom>& adds, std::vector<Atom>& dels) {
  expect_list(n, "an effect");
  if (n.items.empty()) return;
  if (n.items.front().is_list) fail("expected a connective or predicate", n);
  if (head_is(n, "and")) {
    for (std::size_t i = 1; i < n.items.size(); ++i) parse_effect(n.items[i], adds, dels);
    return;
  }
  if (head_is(n, "not")) {
    if (n.items.size() != 2) fail("'not' takes exactly one atom", n);
    const Node& inner = expect_list(n.items[1], "an atom");
    if (!inner.items.empty() && !inner.items.front().is_list &&
        kUnsupportedConnectives.contains(inner.items.front().atom)) {
      reject_connective(inner, "effect");
    }
    dels.push_back(parse_atom(inner));
    return;
  }
  reject_connective(n, "effect");
  adds.push_back(parse_atom(n));
}

ActionSchema parse_action(const Node& n) {
  ActionSchema schema;
  schema.pos = n.pos;
  if (n.items.size() < 2) fail("action without a name", n);
  schema.name = expect_atom(n.items[1], "an action name");
  for (std::size_t i = 2; i < n.items.size(); ++i) {
    const Node& key = n.items[i];
    const auto& kw = expect_atom(key, "an action keyword");
    if (i + 1 >= n.items.size()) fail("missing value for " + kw, key);
    const Node& value = n.items[++i];
    if (kw == ":parameters") {
      schema.params = parse_typed_list(expect_list(value, "a parameter list").items, 0, true);
    } else if (kw == ":precondition") {
      parse_condition(value, schema.precondition);
    } else if (kw == ":effect") {
      parse_effect(value, schema.add_effects, schema.del_effects);
    } else {
      throw UnsupportedFeature("action keyword " + kw + " is not supported");
    }
  }
  return schema;
}

void check_type_declared(const DomainAST& d, const std::string& type, const std::string& context) {
  if (!d.has_type(type)) throw SemanticError("undeclared type '" + type + "' in " + context);
}

void check_schema(const DomainAST& d, const ActionSchema& a) {
  std::set<std::string, std::less<>> vars;
  for (const auto& p : a.params) {
    check_type_declared(d, p.type, "action " + a.name);
    if (!vars.insert(p.name).second) {
      throw SemanticError("duplicate parameter " + p.name + " in action " + a.name);
    }
  }
  auto check = [&](const Atom& atom) {
    const PredicateDecl* decl = d.find_predicate(atom.predicate);
    if (decl == nullptr) {
      throw SemanticError("undeclared predicate '" + atom.predicate + "' in action " + a.name +
                          " at line " + std::to_string(atom.pos.line));
    }
    if (decl->params.size() != atom.args.size()) {
      throw SemanticError("arity mismatch for '" + atom.predicate + "' in action " + a.name);
    }
    for (const auto& arg : atom.args) {
      if (arg.front() == '?') {
        if (!vars.contains(arg)) {
          throw SemanticError("unbound variable " + arg + " in action " + a.name);
        }
      } else if (std::none_of(d.constants.begin(), d.constants.end(),
                              [&](const TypedName& c) { return c.name == arg; })) {
        throw SemanticError("undeclared constant '" + arg + "' in action " + a.name);
      }
    }
  };
  std::for_each(a.precondition.begin(), a.precondition.end(), check);
  std::for_each(a.add_effects.begin(), a.add_effects.end(), check);
  std::for_each(a.del_effects.begin(), a.del_effects.end(), check);
}

void check_header(const Node& root, const char* kind) {
  expect_list(root, "(define ...)");
  if (!head_is(root, "define")) fail("expected (define ...)", root);
  if (root.items.size() < 2 || !head_is(root.items[1], kind) || root.items[1].items.size() != 2) {
    fail(std::string("expected (") + kind + " <name>)", root.items.size() > 1 ? root.items[1] : root);
  }
}

}  // namespace

const PredicateDecl* DomainAST::find_predicate(std::string_view pred) const {
  auto it = std::find_if(predicates.begin(), predicates.end(),
                         [&](const PredicateDecl& p) { return p.name == pred; });
  return it == predicates.end() ? nullptr : &*it;
}

bool DomainAST::has_type(std::string_view type) const {
  return type == "object" || std::any_of(types.begin(), types.end(),
                                          [&](const TypedName& t) { return t.name == type; });
}

bool DomainAST::is_subtype(std::string_view type, std::string_view ancestor) const {
  std::string current(type);
  // Bounded walk; cyclic declarations terminate.
  for (std::size_t steps = 0; steps <= types.size() + 1; ++steps) {
    if (current == ancestor) return true;
    if (current == "object") return false;
    auto it = std::find_if(types.begin(), types.end(),
                           [&](const TypedName& t) { return t.name == current; });
    if (it == types.end() || it->type == current) return ancestor == "object";
    current = it->type;
  }
  return false;
}

DomainAST parse_domain(std::string_view text) {
  Node root = Reader(text).read_document();
  check_header(root, "domain");
  DomainAST d;
  d.name = expect_atom(root.items[1].items[1], "a domain name");

  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const Node& section = expect_list(root.items[i], "a domain section");
    if (section.items.empty()) fail("empty section", section);
    const auto& kw = expect_atom(section.items.front(), "a section keyword");
    if (kw == ":requirements") {
      check_requirements(section, d.requirements);
    } else if (kw == ":types") {
      auto types = parse_typed_list(section.items, 1, false);
      d.types.insert(d.types.end(), types.begin(), types.end());
    } else if (kw == ":constants") {
      auto cs = parse_typed_list(section.items, 1, false);
      d.constants.insert(d.constants.end(), cs.begin(), cs.end());
    } else if (kw == ":predicates") {
      for (std::size_t j = 1; j < section.items.size(); ++j) {
        const Node& p = expect_list(section.items[j], "a predicate declaration");
        if (p.items.empty()) fail("empty predicate declaration", p);
        PredicateDecl decl;
        decl.name = expect_atom(p.items.front(), "a predicate name");
        decl.params = parse_typed_list(p.items, 1, true);
        d.predicates.push_back(std::move(decl));
      }
    } else if (kw == ":action") {
      d.actions.push_back(parse_action(section));
    } else {
      throw UnsupportedFeature("domain section " + kw + " is not supported");
    }
  }

  // Types referenced as parents must themselves be declared (or be object).
  // A parent type used before (or without) its own declaration is an
  // implicit subtype of object.
  for (std::size_t i = 0; i < d.types.size(); ++i) {
    std::string parent = d.types[i].type;
    if (!d.has_type(parent)) d.types.push_back({parent, "object"});
  }
  for (const auto& c : d.constants) check_type_declared(d, c.type, "constant " + c.name);
  for (const auto& p : d.predicates) {
    for (const auto& param : p.params) check_type_declared(d, param.type, "predicate " + p.name);
  }
  for (const auto& a : d.actions) check_schema(d, a);
  return d;
}

ProblemAST parse_problem(std::string_view text, const DomainAST& domain) {
  Node root = Reader(text).read_document();
  check_header(root, "problem");
  ProblemAST p;
  p.name = expect_atom(root.items[1].items[1], "a problem name");

  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const Node& section = expect_list(root.items[i], "a problem section");
    if (section.items.empty()) fail("empty section", section);
    const auto& kw = expect_atom(section.items.front(), "a section keyword");
    if (kw == ":domain") {
      if (section.items.size() != 2) fail("expected (:domain <name>)", section);
      p.domain_name = expect_atom(section.items[1], "a domain name");
    } else if (kw == ":requirements") {
      std::vector<std::string> ignored;
      check_requirements(section, ignored);
    } else if (kw == ":objects") {
      auto objs = parse_typed_list(section.items, 1, false);
      p.objects.insert(p.objects.end(), objs.begin(), objs.end());
    } else if (kw == ":init") {
      for (std::size_t j = 1; j < section.items.size(); ++j) {
        const Node& n = expect_list(section.items[j], "an init atom");
        if (!n.items.empty() && !n.items.front().is_list) reject_connective(n, "init");
        p.init.push_back(parse_atom(n));
      }
    } else if (kw == ":goal") {
      if (section.items.size() != 2) fail("expected exactly one goal condition", section);
      parse_condition(section.items[1], p.goal);
    } else {
      throw UnsupportedFeature("problem section " + kw + " is not supported");
    }
  }

  if (p.domain_name != domain.name) {
    throw SemanticError("problem is for domain '" + p.domain_name + "', not '" + domain.name + "'");
  }
  for (const auto& o : p.objects) check_type_declared(domain, o.type, "object " + o.name);

  auto check_atom = [&](const Atom& atom, const char* where) {
    Fact f{atom.predicate, atom.args};
    try {
      check_fact(domain, p, f);
    } catch (const SemanticError& e) {
      throw SemanticError(std::string(e.what()) + " in " + where + " at line " +
                          std::to_string(atom.pos.line));
    }
  };
  for (const auto& a : p.init) check_atom(a, "init");
  for (const auto& a : p.goal) check_atom(a, "goal");
  return p;
}

void check_fact(const DomainAST& domain, const ProblemAST& problem, const Fact& fact) {
  const PredicateDecl* decl = domain.find_predicate(fact.predicate);
  if (decl == nullptr) throw SemanticError("undeclared predicate '" + fact.predicate + "'");
  if (decl->params.size() != fact.args.size()) {
    throw SemanticError("arity mismatch for " + fact.to_string());
  }
  for (std::size_t i = 0; i < fact.args.size(); ++i) {
    const auto& arg = fact.args[i];
    if (!arg.empty() && arg.front() == '?') {
      throw SemanticError("variable " + arg + " in ground atom " + fact.to_string());
    }
    const TypedName* obj = nullptr;
    for (const auto& o : problem.objects) {
      if (o.name == arg) obj = &o;
    }
    for (const auto& c : domain.constants) {
      if (c.name == arg) obj = &c;
    }
    if (obj == nullptr) throw SemanticError("unknown object '" + arg + "' in " + fact.to_string());
    if (!domain.is_subtype(obj->type, decl->params[i].type)) {
      throw SemanticError("object '" + arg + "' has type " + obj->type + ", expected " +
                          decl->params[i].type + " in " + fact.to_string());
    }
  }
}

namespace {

void print_typed(std::ostringstream& out, const std::vector<TypedName>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out << ' ';
    out << names[i].name << " - " << names[i].type;
  }
}

void print_atom(std::ostringstream& out, const Atom& a) {
  out << '(' << a.predicate;
  for (const auto& arg : a.args) out << ' ' << arg;
  out << ')';
}

void print_conjunction(std::ostringstream& out, const std::vector<Atom>& pos,
                       const std::vector<Atom>& neg = {}) {
  out << "(and";
  for (const auto& a : pos) {
    out << ' ';
    print_atom(out, a);
  }
  for (const auto& a : neg) {
    out << " (not ";
    print_atom(out, a);
    out << ')';
  }
  out << ')';
}

}  // namespace

std::string to_pddl(const DomainAST& d) {
  std::ostringstream out;
  out << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    out << "  (:requirements";
    for (const auto& r : d.requirements) out << ' ' << r;
    out << ")\n";
  }
  if (!d.types.empty()) {
    out << "  (:types ";
    print_typed(out, d.types);
    out << ")\n";
  }
  if (!d.constants.empty()) {
    out << "  (:constants ";
    print_typed(out, d.constants);
    out << ")\n";
  }
  out << "  (:predicates";
  for (const auto& p : d.predicates) {
    out << " (" << p.name;
    if (!p.params.empty()) out << ' ';
    print_typed(out, p.params);
    out << ')';
  }
  out << ")\n";
  for (const auto& a : d.actions) {
    out << "  (:action " << a.name << "\n    :parameters (";
    print_typed(out, a.params);
    out << ")\n    :precondition ";
    print_conjunction(out, a.precondition);
    out << "\n    :effect ";
    print_conjunction(out, a.add_effects, a.del_effects);
    out << ")\n";
  }
  out << ")\n";
  return out.str();
}

std::string to_pddl(const ProblemAST& p) {
  std::ostringstream out;
  out << "(define (problem " << p.name << ")\n  (:domain " << p.domain_name << ")\n";
  out << "  (:objects ";
  print_typed(out, p.objects);
  out << ")\n  (:init";
  for (const auto& a : p.init) {
    out << "\n    ";
    print_atom(out, a);
  }
  out << ")\n  (:goal ";
  print_conjunction(out, p.goal);
  out << "))\n";
  return out.str();
}

}  // namespace lmgr::pddl
