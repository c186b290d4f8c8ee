// lmgr: landmark-based goal recognition from the command line.
#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lmgr/bench_tools.hpp"
#include "lmgr/bundle.hpp"
#include "lmgr/error.hpp"
#include "lmgr/evaluation.hpp"
#include "lmgr/landmarks.hpp"
#include "lmgr/recognition.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitResource = 2;

void setup_logging() {
  auto logger = spdlog::stderr_color_st("lmgr");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("LMGR_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

// Machine output goes to --out when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  lmgr::write_text_file(out_path, text);
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

json fact_strings(const lmgr::GroundedProblem& p, const std::vector<lmgr::FactId>& facts) {
  json out = json::array();
  for (auto f : facts) out.push_back(p.fact_string(f));
  return out;
}

std::vector<bool> parse_bools(const std::vector<std::string>& values) {
  std::vector<bool> out;
  for (const auto& v : values) {
    if (v == "true" || v == "1" || v == "yes") {
      out.push_back(true);
    } else if (v == "false" || v == "0" || v == "no") {
      out.push_back(false);
    } else {
      throw std::invalid_argument("expected true or false, got '" + v + "'");
    }
  }
  return out;
}

struct Options {
  std::string bundle;
  std::string bundles;
  std::string out;
  // Empty means "not given"; defaults depend on the subcommand.
  std::vector<std::string> extractors;
  std::vector<std::string> heuristics;
  std::vector<std::string> include_init;
  bool no_init_landmarks = false;
  double lambda = 1.0;
  std::vector<double> lambdas = lmgr::default_lambda_grid();
  std::vector<std::string> variants{"random", "longest", "shortest"};
  std::uint64_t seed = 1;
  std::size_t state_cap = 100'000;
  std::size_t max_actions = 1'000'000;
  std::size_t node_cap = 1'000'000;
  int jobs = 0;
  std::string plot_dir;
};

lmgr::pddl::GroundingOptions grounding(const Options& o) { return {o.max_actions}; }

int run_extract(const Options& o) {
  auto bundle = lmgr::load_bundle(o.bundle, grounding(o));
  std::string text;
  for (const auto& name : o.extractors) {
    auto e = lmgr::parse_extractor(name);
    auto t0 = std::chrono::steady_clock::now();
    auto sets = lmgr::extract_all(bundle, e);
    spdlog::info("{} extraction on {}: {:.1f} ms", lmgr::to_string(e), bundle.name, elapsed_ms(t0));
    for (std::size_t g = 0; g < sets.size(); ++g) {
      for (const auto& l : sets[g].landmarks) {
        json line;
        line["goal_index"] = g;
        line["disjuncts"] = fact_strings(bundle.problem, l.disjuncts);
        line["category"] = lmgr::to_string(l.category);
        line["extractor"] = lmgr::to_string(e);
        text += line.dump() + "\n";
      }
    }
  }
  emit(o.out, text);
  return 0;
}

int run_recognize(const Options& o) {
  if (o.extractors.size() != 1 || o.heuristics.size() != 1 || o.include_init.size() != 1) {
    throw std::invalid_argument("recognize takes a single extractor, heuristic and include-init value");
  }
  lmgr::RecognitionConfig cfg;
  cfg.extractor = lmgr::parse_extractor(o.extractors[0]);
  cfg.heuristic = lmgr::parse_heuristic(o.heuristics[0]);
  cfg.include_initial_state_landmarks = !o.no_init_landmarks && parse_bools(o.include_init)[0];

  lmgr::OnlineProblem problem;
  problem.bundle = lmgr::load_bundle(o.bundle, grounding(o));
  auto prefix = lmgr::observation_prefix(problem, o.lambda);
  auto result = lmgr::recognize(problem.bundle, cfg, prefix);

  const auto& b = problem.bundle;
  json out;
  out["bundle"] = b.name;
  out["extractor"] = lmgr::to_string(cfg.extractor);
  out["heuristic"] = lmgr::to_string(cfg.heuristic);
  out["include_init"] = cfg.include_initial_state_landmarks;
  out["lambda"] = o.lambda;
  out["observations"] = prefix.size();
  out["horizon"] = problem.horizon();
  json scores = json::array();
  for (const auto& s : result.scores) {
    std::vector<lmgr::FactId> goal(b.goals[s.goal_index].begin(), b.goals[s.goal_index].end());
    json entry;
    entry["goal_index"] = s.goal_index;
    entry["goal"] = fact_strings(b.problem, goal);
    entry["score"] = lmgr::to_fraction_string(s.score);
    entry["value"] = static_cast<double>(s.score);
    entry["achieved"] = s.achieved_count;
    entry["total"] = s.total_count;
    scores.push_back(std::move(entry));
  }
  out["scores"] = std::move(scores);
  out["recognized"] = result.recognized;
  out["true_goal"] = b.true_goal;
  out["precision"] = static_cast<double>(lmgr::problem_precision(result, b.true_goal));
  emit(o.out, out.dump(2) + "\n");
  return 0;
}

int run_evaluate(const Options& o) {
  std::vector<lmgr::Extractor> extractors;
  for (const auto& e : o.extractors) extractors.push_back(lmgr::parse_extractor(e));
  std::vector<lmgr::Heuristic> heuristics;
  for (const auto& h : o.heuristics) heuristics.push_back(lmgr::parse_heuristic(h));
  auto flags = parse_bools(o.include_init);
  auto include = std::make_unique<bool[]>(flags.size());
  std::copy(flags.begin(), flags.end(), include.get());

  for (double l : o.lambdas) {
    if (l < 0.0 || l > 1.0) throw std::invalid_argument("lambda values must lie in [0, 1]");
  }
  auto configs = lmgr::config_product(extractors, heuristics, std::span<const bool>(include.get(), flags.size()));

  auto t0 = std::chrono::steady_clock::now();
  auto problems = lmgr::load_dataset(o.bundles, grounding(o));
  spdlog::info("loaded {} problems in {:.1f} ms", problems.size(), elapsed_ms(t0));

  lmgr::EvaluationOptions options;
  options.lambdas = o.lambdas;
  options.jobs = o.jobs;
  t0 = std::chrono::steady_clock::now();
  auto rows = lmgr::evaluate(problems, configs, options);
  spdlog::info("evaluated {} configurations in {:.1f} ms", configs.size(), elapsed_ms(t0));

  emit(o.out, lmgr::to_csv(rows));
  if (!o.plot_dir.empty()) {
    auto pooled = lmgr::pool_domains(rows);
    for (const auto& path : lmgr::write_plot_data(pooled, o.plot_dir)) {
      spdlog::info("wrote {}", path.string());
    }
  }
  return 0;
}

int run_mutate(const Options& o) {
  if (o.out.empty()) throw std::invalid_argument("mutate needs --out");
  std::vector<lmgr::VariantKind> kinds;
  for (const auto& v : o.variants) kinds.push_back(lmgr::parse_variant(v));
  auto dirs = lmgr::find_bundle_dirs(o.bundles);
  if (dirs.empty()) throw lmgr::BundleError("no bundles found below " + o.bundles);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const std::uint64_t seed = lmgr::splitmix64(o.seed + i);
    auto rel = fs::relative(dirs[i], o.bundles);
    for (auto kind : kinds) {
      fs::path target = fs::path(o.out) / std::string(lmgr::variant_label(kind)) / rel;
      auto report = lmgr::write_variant_bundle(dirs[i], target, {kind, seed}, {o.node_cap});
      if (!report.unmodified_goals.empty()) {
        spdlog::warn("{}: {} goal(s) left unmodified", target.string(), report.unmodified_goals.size());
      }
      spdlog::info("wrote {} (plan length {})", target.string(), report.plan_length);
    }
  }
  return 0;
}

int run_oracle_check(const Options& o) {
  auto bundle = lmgr::load_bundle(o.bundle, grounding(o));
  json violations = json::array();
  std::size_t checked = 0;
  std::size_t unsolvable = 0;
  for (std::size_t g = 0; g < bundle.goals.size(); ++g) {
    std::optional<lmgr::LandmarkOracle> oracle;
    try {
      oracle.emplace(bundle.problem, bundle.goals[g], lmgr::OracleOptions{o.state_cap});
    } catch (const lmgr::UnsolvableError&) {
      spdlog::warn("goal {} is unreachable; every fact is vacuously a landmark", g);
      ++unsolvable;
      continue;
    }
    for (const auto& name : o.extractors) {
      auto e = lmgr::parse_extractor(name);
      for (const auto& l : lmgr::extract(bundle.problem, bundle.goals[g], e).landmarks) {
        ++checked;
        if (oracle->confirms(l)) continue;
        json v;
        v["goal_index"] = g;
        v["extractor"] = lmgr::to_string(e);
        v["disjuncts"] = fact_strings(bundle.problem, l.disjuncts);
        std::cerr << "violation: goal " << g << " " << lmgr::to_string(e) << " landmark "
                  << v["disjuncts"].dump() << " is avoided by some plan\n";
        violations.push_back(std::move(v));
      }
    }
  }
  json out;
  out["bundle"] = bundle.name;
  out["landmarks_checked"] = checked;
  out["unsolvable_goals"] = unsolvable;
  out["violations"] = violations;
  emit(o.out, out.dump(2) + "\n");
  return violations.empty() ? 0 : kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  Options o;
  CLI::App app{"Landmark-based goal recognition over STRIPS problems"};
  app.require_subcommand(1, 1);

  auto add_config = [&](CLI::App* sub, bool multi) {
    sub->add_option("--extractor", o.extractors,
                    multi ? "Landmark extractors, comma separated [default: ex,rhw]"
                          : "Landmark extractor: ex or rhw [default: ex]")
        ->delimiter(',');
    sub->add_option("--heuristic", o.heuristics,
                    multi ? "Heuristics, comma separated [default: completion,uniqueness]"
                          : "Heuristic: completion or uniqueness [default: completion]")
        ->delimiter(',');
    sub->add_option("--include-init", o.include_init,
                    multi ? "Keep initial-state landmarks, comma separated [default: false,true]"
                          : "Keep initial-state landmarks: true or false [default: false]")
        ->delimiter(',');
  };
  auto add_grounding = [&](CLI::App* sub) {
    sub->add_option("--max-actions", o.max_actions, "Grounded action cap")->capture_default_str();
  };

  auto* extract = app.add_subcommand("extract", "Print the landmarks of every candidate goal as JSON lines");
  extract->add_option("--bundle", o.bundle, "Bundle directory")->required()->check(CLI::ExistingDirectory);
  extract->add_option("--extractor", o.extractors, "Landmark extractors, comma separated [default: ex]")
      ->delimiter(',');
  extract->add_option("--out", o.out, "Output file (default: standard output)");
  add_grounding(extract);

  auto* recognize = app.add_subcommand("recognize", "Score the candidate goals on an observation prefix");
  recognize->add_option("--bundle", o.bundle, "Bundle directory")->required()->check(CLI::ExistingDirectory);
  add_config(recognize, false);
  recognize->add_flag("--no-init-landmarks", o.no_init_landmarks,
                      "Drop landmarks that hold in the initial state (same as --include-init false)");
  recognize->add_option("--lambda", o.lambda, "Fraction of the observations to reveal")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  recognize->add_option("--out", o.out, "Output file (default: standard output)");
  add_grounding(recognize);

  auto* evaluate = app.add_subcommand("evaluate", "Precision over a dataset for every configuration, as CSV");
  evaluate->add_option("--bundles", o.bundles, "Root directory searched for bundles")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_config(evaluate, true);
  evaluate->add_option("--lambdas", o.lambdas, "Observation fractions (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  evaluate->add_option("--jobs", o.jobs, "Worker threads (0: one per processor)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  evaluate->add_option("--out", o.out, "CSV file (default: standard output)");
  evaluate->add_option("--plot-dir", o.plot_dir, "Directory for per-variant gnuplot data files");
  add_grounding(evaluate);

  auto* mutate = app.add_subcommand("mutate", "Write D_R/D_L/D_S variants of a set of bundles");
  mutate->add_option("--bundles", o.bundles, "Root directory of the source bundles")
      ->required()
      ->check(CLI::ExistingDirectory);
  mutate->add_option("--out", o.out, "Output root; variants go to <out>/<D_R|D_L|D_S>/...")->required();
  mutate->add_option("--variant", o.variants, "Variants: random, longest, shortest (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  mutate->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  mutate->add_option("--node-cap", o.node_cap, "Planner node cap")->capture_default_str();
  add_grounding(mutate);

  auto* oracle = app.add_subcommand("oracle-check", "Check extracted landmarks against plan enumeration");
  oracle->add_option("--bundle", o.bundle, "Bundle directory")->required()->check(CLI::ExistingDirectory);
  oracle->add_option("--extractor", o.extractors, "Landmark extractors, comma separated [default: ex,rhw]")
      ->delimiter(',');
  oracle->add_option("--state-cap", o.state_cap, "Refuse when more states are reachable")
      ->capture_default_str();
  oracle->add_option("--out", o.out, "Output file (default: standard output)");
  add_grounding(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  const bool multi = *evaluate || *oracle;
  if (o.extractors.empty()) o.extractors = multi ? std::vector<std::string>{"ex", "rhw"} : std::vector<std::string>{"ex"};
  if (o.heuristics.empty()) o.heuristics = *evaluate ? std::vector<std::string>{"completion", "uniqueness"} : std::vector<std::string>{"completion"};
  if (o.include_init.empty()) o.include_init = *evaluate ? std::vector<std::string>{"false", "true"} : std::vector<std::string>{"false"};

  try {
    if (*extract) return run_extract(o);
    if (*recognize) return run_recognize(o);
    if (*evaluate) return run_evaluate(o);
    if (*mutate) return run_mutate(o);
    if (*oracle) return run_oracle_check(o);
  } catch (const lmgr::ResourceError& e) {
    spdlog::error("{}", e.what());
    return kExitResource;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInput;
  }
  return kExitInput;
}
