#include "lmgr/bundle.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lmgr/error.hpp"

namespace lmgr {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string where(const fs::path& file, std::size_t line) {
  return file.filename().string() + " line " + std::to_string(line);
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BundleError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BundleError("cannot write " + path.string());
  out << text;
}

std::vector<Fact> parse_fact_list(std::string_view line) {
  std::vector<Fact> facts;
  std::size_t pos = 0;
  while (pos < line.size()) {
    auto open = line.find('(', pos);
    if (open == std::string_view::npos) {
      if (!trim(line.substr(pos)).empty() &&
          line.substr(pos).find_first_not_of(" \t\r\n,") != std::string_view::npos) {
        throw ParseError("unexpected text '" + trim(line.substr(pos)) + "' in fact list");
      }
      break;
    }
    auto between = line.substr(pos, open - pos);
    if (between.find_first_not_of(" \t\r\n,") != std::string_view::npos) {
      throw ParseError("unexpected text '" + trim(between) + "' in fact list");
    }
    auto close = line.find(')', open);
    if (close == std::string_view::npos) throw ParseError("unterminated atom in fact list");
    facts.push_back(parse_fact(line.substr(open, close - open + 1)));
    pos = close + 1;
  }
  return facts;
}

std::string format_fact_list(const std::vector<Fact>& facts) {
  std::string out;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (i > 0) out += ", ";
    out += facts[i].to_string();
  }
  return out;
}

Fact parse_action_line(std::string_view line) { return parse_fact(trim(line)); }

std::string strip_placeholder(std::string_view template_text) {
  std::string text(template_text);
  for (const std::string marker : {"<HYPOTHESIS>", "<hypothesis>"}) {
    for (auto at = text.find(marker); at != std::string::npos; at = text.find(marker)) {
      text.erase(at, marker.size());
    }
  }
  return text;
}

BundleSources read_bundle_sources(const fs::path& dir) {
  for (const char* name : {"domain.pddl", "template.pddl", "hyps.dat"}) {
    if (!fs::exists(dir / name)) throw BundleError("missing file " + (dir / name).string());
  }
  BundleSources src;
  src.domain = pddl::parse_domain(read_text_file(dir / "domain.pddl"));
  src.problem = pddl::parse_problem(strip_placeholder(read_text_file(dir / "template.pddl")),
                                    src.domain);
  auto lines = read_lines(dir / "hyps.dat");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    try {
      auto facts = parse_fact_list(lines[i]);
      if (facts.empty()) throw ParseError("empty hypothesis");
      for (const auto& f : facts) pddl::check_fact(src.domain, src.problem, f);
      src.hypotheses.push_back(std::move(facts));
    } catch (const Error& e) {
      throw BundleError(where(dir / "hyps.dat", i + 1) + ": " + e.what());
    }
  }
  if (src.hypotheses.empty()) throw BundleError("no hypotheses in " + (dir / "hyps.dat").string());
  return src;
}

RecognitionBundle load_bundle(const fs::path& dir, const pddl::GroundingOptions& options) {
  for (const char* name : {"real_hyp.dat", "obs.dat"}) {
    if (!fs::exists(dir / name)) throw BundleError("missing file " + (dir / name).string());
  }
  BundleSources src = read_bundle_sources(dir);

  std::vector<Fact> goal_facts;
  for (const auto& h : src.hypotheses) goal_facts.insert(goal_facts.end(), h.begin(), h.end());

  RecognitionBundle b;
  b.name = fs::absolute(dir).lexically_normal().filename().string();
  if (b.name.empty()) b.name = fs::absolute(dir).lexically_normal().parent_path().filename().string();
  b.domain_name = src.domain.name;
  b.problem = pddl::ground(src.domain, src.problem, goal_facts, options);
  for (const auto& h : src.hypotheses) b.goals.push_back(b.problem.make_state(h));

  std::vector<std::string> real_lines;
  for (const auto& l : read_lines(dir / "real_hyp.dat")) {
    if (!trim(l).empty()) real_lines.push_back(l);
  }
  if (real_lines.size() != 1) {
    throw BundleError("real_hyp.dat must contain exactly one line, found " +
                      std::to_string(real_lines.size()));
  }
  State real;
  try {
    auto facts = parse_fact_list(real_lines.front());
    std::vector<FactId> ids;
    for (const auto& f : facts) {
      auto id = b.problem.find_fact(f);
      if (!id) throw BundleError("true hypothesis fact " + f.to_string() + " is not a candidate fact");
      ids.push_back(*id);
    }
    real = State(std::move(ids));
  } catch (const ParseError& e) {
    throw BundleError(std::string("real_hyp.dat: ") + e.what());
  }
  auto it = std::find(b.goals.begin(), b.goals.end(), real);
  if (it == b.goals.end()) {
    throw BundleError("real_hyp.dat does not match any line of hyps.dat");
  }
  b.true_goal = static_cast<std::size_t>(it - b.goals.begin());

  auto obs = read_lines(dir / "obs.dat");
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (trim(obs[i]).empty()) continue;
    Fact call;
    try {
      call = parse_action_line(obs[i]);
    } catch (const ParseError& e) {
      throw BundleError(where(dir / "obs.dat", i + 1) + ": " + e.what());
    }
    auto id = b.problem.find_action(call.predicate, call.args);
    if (!id) {
      throw BundleError(where(dir / "obs.dat", i + 1) + ": observation " + call.to_string() +
                        " does not resolve to a grounded action");
    }
    b.observations.push_back(*id);
  }
  return b;
}

std::vector<fs::path> find_bundle_dirs(const fs::path& root) {
  std::vector<fs::path> out;
  auto is_bundle = [](const fs::path& d) {
    return fs::exists(d / "domain.pddl") && fs::exists(d / "hyps.dat");
  };
  if (!fs::is_directory(root)) throw BundleError("not a directory: " + root.string());
  if (is_bundle(root)) out.push_back(root);
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_directory() && is_bundle(entry.path())) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lmgr
