#include "lmgr/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>

#include "lmgr/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lmgr {

namespace fs = std::filesystem;

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

std::size_t prefix_length(std::size_t horizon, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must lie in [0, 1]");
  auto n = static_cast<std::size_t>(std::floor(static_cast<double>(horizon) * lambda + 1e-9));
  return std::min(n, horizon);
}

std::span<const ActionId> observation_prefix(const OnlineProblem& problem, double lambda) {
  std::span<const ActionId> all = problem.bundle.observations;
  return all.first(prefix_length(all.size(), lambda));
}

Rational problem_precision(const RecognitionResult& r, std::size_t true_goal) {
  bool hit = std::find(r.recognized.begin(), r.recognized.end(), true_goal) != r.recognized.end();
  if (!hit) return Rational(0);
  return Rational(1, r.recognized.size());
}

double precision(double lambda, std::span<const OnlineProblem> problems,
                 const RecognitionConfig& cfg) {
  if (problems.empty()) throw std::invalid_argument("precision over an empty problem set");
  Rational sum = 0;
  for (const auto& problem : problems) {
    auto result = recognize(problem.bundle, cfg, observation_prefix(problem, lambda));
    sum += problem_precision(result, problem.bundle.true_goal);
  }
  return static_cast<double>(sum / problems.size());
}

namespace {

// precision[config][lambda] for one problem.
using ProblemScores = std::vector<std::vector<Rational>>;

ProblemScores score_problem(const OnlineProblem& problem,
                            std::span<const RecognitionConfig> configs,
                            const EvaluationOptions& options) {
  std::map<Extractor, std::vector<LandmarkSet>> cache;
  ProblemScores scores;
  scores.reserve(configs.size());
  for (const auto& cfg : configs) {
    std::vector<LandmarkSet> uncached;
    const std::vector<LandmarkSet>* sets;
    if (options.cache_landmarks) {
      auto it = cache.find(cfg.extractor);
      if (it == cache.end()) it = cache.emplace(cfg.extractor, extract_all(problem.bundle, cfg.extractor)).first;
      sets = &it->second;
    } else {
      uncached = extract_all(problem.bundle, cfg.extractor);
      sets = &uncached;
    }
    std::vector<Rational> per_lambda;
    for (double lambda : options.lambdas) {
      auto result = recognize(problem.bundle, *sets, cfg, observation_prefix(problem, lambda));
      per_lambda.push_back(problem_precision(result, problem.bundle.true_goal));
    }
    scores.push_back(std::move(per_lambda));
  }
  return scores;
}

bool row_less(const EvaluationRow& a, const EvaluationRow& b) {
  return std::tie(a.domain, a.variant, a.extractor, a.heuristic, a.include_init, a.lambda) <
         std::tie(b.domain, b.variant, b.extractor, b.heuristic, b.include_init, b.lambda);
}

std::vector<EvaluationRow> aggregate(std::span<const OnlineProblem> problems,
                                     std::span<const RecognitionConfig> configs,
                                     const EvaluationOptions& options,
                                     const std::vector<ProblemScores>& scores) {
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    groups[{problems[i].domain, problems[i].variant}].push_back(i);
  }
  std::vector<EvaluationRow> rows;
  for (const auto& [key, members] : groups) {
    for (std::size_t c = 0; c < configs.size(); ++c) {
      for (std::size_t l = 0; l < options.lambdas.size(); ++l) {
        Rational sum = 0;
        for (std::size_t i : members) sum += scores[i][c][l];
        EvaluationRow row;
        row.domain = key.first;
        row.variant = key.second;
        row.extractor = configs[c].extractor;
        row.heuristic = configs[c].heuristic;
        row.include_init = configs[c].include_initial_state_landmarks;
        row.lambda = options.lambdas[l];
        row.precision = static_cast<double>(sum / members.size());
        row.n_problems = members.size();
        rows.push_back(std::move(row));
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), row_less);
  return rows;
}

void check_inputs(std::span<const OnlineProblem> problems, const EvaluationOptions& options) {
  for (double lambda : options.lambdas) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  for (const auto& p : problems) {
    if (p.horizon() == 0) {
      throw BundleError("problem " + p.bundle.name + " has no observations");
    }
  }
}

}  // namespace

std::vector<EvaluationRow> evaluate(std::span<const OnlineProblem> problems,
                                    std::span<const RecognitionConfig> configs,
                                    const EvaluationOptions& options) {
  check_inputs(problems, options);
  std::vector<ProblemScores> scores(problems.size());
  std::vector<std::exception_ptr> errors(problems.size());
  const auto n = static_cast<std::int64_t>(problems.size());
#ifdef _OPENMP
  const int threads = options.jobs > 0 ? options.jobs : omp_get_max_threads();
#else
  const int threads = 1;
#endif
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      scores[i] = score_problem(problems[i], configs, options);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  // Report the first failing problem in input order, independent of timing.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return aggregate(problems, configs, options, scores);
}

namespace serial {

std::vector<EvaluationRow> evaluate(std::span<const OnlineProblem> problems,
                                    std::span<const RecognitionConfig> configs,
                                    const EvaluationOptions& options) {
  check_inputs(problems, options);
  std::vector<ProblemScores> scores;
  scores.reserve(problems.size());
  for (const auto& p : problems) scores.push_back(score_problem(p, configs, options));
  return aggregate(problems, configs, options, scores);
}

}  // namespace serial

std::vector<EvaluationRow> pool_domains(std::span<const EvaluationRow> rows) {
  using Key = std::tuple<std::string, Extractor, Heuristic, bool, double>;
  std::map<Key, std::pair<double, std::size_t>> acc;
  for (const auto& r : rows) {
    auto& [weighted, count] =
        acc[{r.variant, r.extractor, r.heuristic, r.include_init, r.lambda}];
    weighted += r.precision * static_cast<double>(r.n_problems);
    count += r.n_problems;
  }
  std::vector<EvaluationRow> out;
  for (const auto& [key, value] : acc) {
    EvaluationRow row;
    row.domain = "all";
    std::tie(row.variant, row.extractor, row.heuristic, row.include_init, row.lambda) = key;
    row.precision = value.second == 0 ? 0.0 : value.first / static_cast<double>(value.second);
    row.n_problems = value.second;
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<OnlineProblem> load_dataset(const fs::path& root,
                                        const pddl::GroundingOptions& grounding) {
  std::vector<OnlineProblem> problems;
  for (const auto& dir : find_bundle_dirs(root)) {
    OnlineProblem problem;
    try {
      problem.bundle = load_bundle(dir, grounding);
      problem.bundle.name = fs::relative(dir, root).generic_string();
      if (problem.bundle.name == ".") problem.bundle.name = dir.filename().string();
      problem.domain = problem.bundle.domain_name;
      problem.variant = "none";
      if (fs::exists(dir / "meta.json")) {
        auto meta = nlohmann::json::parse(read_text_file(dir / "meta.json"));
        if (meta.contains("variant")) problem.variant = meta["variant"].get<std::string>();
      }
      if (problem.horizon() == 0) throw BundleError("obs.dat contains no observations");
    } catch (const ResourceError& e) {
      throw ResourceError(dir.string() + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw BundleError(dir.string() + ": meta.json: " + e.what());
    } catch (const Error& e) {
      throw BundleError(dir.string() + ": " + e.what());
    }
    problems.push_back(std::move(problem));
  }
  if (problems.empty()) throw BundleError("no bundles found below " + root.string());
  return problems;
}

std::vector<RecognitionConfig> config_product(std::span<const Extractor> extractors,
                                              std::span<const Heuristic> heuristics,
                                              std::span<const bool> include_init) {
  std::set<std::tuple<Extractor, Heuristic, bool>> unique;
  for (auto e : extractors) {
    for (auto h : heuristics) {
      for (bool i : include_init) unique.emplace(e, h, i);
    }
  }
  std::vector<RecognitionConfig> out;
  for (const auto& [e, h, i] : unique) out.push_back({e, h, i});
  return out;
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string to_csv(std::span<const EvaluationRow> rows) {
  std::string out = "domain,variant,extractor,heuristic,include_init,lambda,precision,n_problems\n";
  for (const auto& r : rows) {
    out += r.domain + "," + r.variant + "," + std::string(to_string(r.extractor)) + "," +
           std::string(to_string(r.heuristic)) + "," + (r.include_init ? "true" : "false") + "," +
           fixed6(r.lambda) + "," + fixed6(r.precision) + "," + std::to_string(r.n_problems) + "\n";
  }
  return out;
}

std::vector<fs::path> write_plot_data(std::span<const EvaluationRow> pooled_rows,
                                      const fs::path& directory) {
  // (variant, heuristic) -> λ -> column label -> precision
  std::map<std::pair<std::string, Heuristic>, std::map<double, std::map<std::string, double>>> blocks;
  std::map<std::pair<std::string, Heuristic>, std::set<std::string>> columns;
  for (const auto& r : pooled_rows) {
    std::string label = std::string(to_string(r.extractor)) + (r.include_init ? "-init" : "");
    blocks[{r.variant, r.heuristic}][r.lambda][label] = r.precision;
    columns[{r.variant, r.heuristic}].insert(label);
  }
  std::vector<fs::path> written;
  fs::create_directories(directory);
  for (const auto& [key, by_lambda] : blocks) {
    std::string text = "# lambda";
    for (const auto& c : columns[key]) text += " " + c;
    text += "\n";
    for (const auto& [lambda, values] : by_lambda) {
      text += fixed6(lambda);
      for (const auto& c : columns[key]) {
        auto it = values.find(c);
        text += " " + (it == values.end() ? std::string("nan") : fixed6(it->second));
      }
      text += "\n";
    }
    fs::path path = directory / (key.first + "_" + std::string(to_string(key.second)) + ".dat");
    write_text_file(path, text);
    written.push_back(path);
  }
  return written;
}

}  // namespace lmgr
