#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lmgr/pddl.hpp"
#include "lmgr/strips.hpp"

namespace lmgr {

// One goal recognition problem: a grounded domain, candidate goals, the true
// goal and the observed action sequence.
struct RecognitionBundle {
  std::string name;         // directory name
  std::string domain_name;  // from domain.pddl
  GroundedProblem problem;
  std::vector<State> goals;
  std::size_t true_goal = 0;
  std::vector<ActionId> observations;
};

// "(on a b), (clear a)" -> facts. Throws ParseError.
std::vector<Fact> parse_fact_list(std::string_view line);
std::string format_fact_list(const std::vector<Fact>& facts);

// "(move c1 c2)" -> (name, args), lower-cased. Throws ParseError.
Fact parse_action_line(std::string_view line);

// Strips the template's hypothesis placeholder so the template parses as a
// problem with an empty (or partial) goal.
std::string strip_placeholder(std::string_view template_text);

struct BundleSources {
  pddl::DomainAST domain;
  pddl::ProblemAST problem;  // template
  std::vector<std::vector<Fact>> hypotheses;
};

// Reads domain.pddl, template.pddl and hyps.dat.
BundleSources read_bundle_sources(const std::filesystem::path& dir);

// Parses every file of the bundle directory, grounds once and resolves the
// observations. Errors name the offending file and line.
RecognitionBundle load_bundle(const std::filesystem::path& dir,
                              const pddl::GroundingOptions& options = {});

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Bundle directories below `root` (including `root` itself), sorted by path.
// A bundle directory is one that contains domain.pddl and hyps.dat.
std::vector<std::filesystem::path> find_bundle_dirs(const std::filesystem::path& root);

}  // namespace lmgr
