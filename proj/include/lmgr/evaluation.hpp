#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lmgr/bundle.hpp"
#include "lmgr/recognition.hpp"

namespace lmgr {

// One online recognition problem with its grouping keys.
struct OnlineProblem {
  std::string domain;
  std::string variant;  // e.g. "D_R"; free-form for unlabelled bundles
  RecognitionBundle bundle;

  std::size_t horizon() const { return bundle.observations.size(); }
};

struct EvaluationRow {
  std::string domain;
  std::string variant;
  Extractor extractor = Extractor::Exhaustive;
  Heuristic heuristic = Heuristic::Completion;
  bool include_init = false;
  double lambda = 0.0;
  double precision = 0.0;
  std::size_t n_problems = 0;
};

// The default λ grid 0.1, 0.2, ..., 1.0.
std::vector<double> default_lambda_grid();

// Number of observations revealed at fraction λ: ⌊T·λ⌋, where the product
// is taken to 1e-9 so that decimal grid values such as 0.3·10 land on 3.
std::size_t prefix_length(std::size_t horizon, double lambda);
std::span<const ActionId> observation_prefix(const OnlineProblem& problem, double lambda);

// [g* ∈ recognized] / |recognized|
Rational problem_precision(const RecognitionResult& r, std::size_t true_goal);

// Mean precision over `problems` at fraction λ. Throws std::invalid_argument
// on an empty set.
double precision(double lambda, std::span<const OnlineProblem> problems,
                 const RecognitionConfig& cfg);

struct EvaluationOptions {
  std::vector<double> lambdas = default_lambda_grid();
  // Extract landmarks once per (problem, extractor) and reuse them across
  // configurations.
  bool cache_landmarks = true;
  // Worker threads for the per-problem loop; 0 uses the OpenMP default.
  int jobs = 0;
};

// One row per (domain, variant, extractor, heuristic, include_init, λ), in
// canonical sorted order. Problems are processed in parallel (OpenMP); see
// serial::evaluate.
std::vector<EvaluationRow> evaluate(std::span<const OnlineProblem> problems,
                                    std::span<const RecognitionConfig> configs,
                                    const EvaluationOptions& options = {});

namespace serial {

// Single-threaded reference for evaluate; output is identical.
std::vector<EvaluationRow> evaluate(std::span<const OnlineProblem> problems,
                                    std::span<const RecognitionConfig> configs,
                                    const EvaluationOptions& options = {});

}  // namespace serial

// Problem-weighted mean over domains: one row per (variant, extractor,
// heuristic, include_init, λ) with domain "all".
std::vector<EvaluationRow> pool_domains(std::span<const EvaluationRow> rows);

// Loads every bundle below `root`. Domain comes from the PDDL domain name,
// the variant from meta.json when present ("none" otherwise). Load errors are
// rethrown with the bundle path attached.
std::vector<OnlineProblem> load_dataset(const std::filesystem::path& root,
                                        const pddl::GroundingOptions& grounding = {});

std::vector<RecognitionConfig> config_product(std::span<const Extractor> extractors,
                                              std::span<const Heuristic> heuristics,
                                              std::span<const bool> include_init);

// CSV with header domain,variant,extractor,heuristic,include_init,lambda,
// precision,n_problems; decimals with 6 fractional digits.
std::string to_csv(std::span<const EvaluationRow> rows);

// gnuplot data blocks, one file per (variant, heuristic): columns λ then one
// precision column per (extractor, include_init). Returns the written paths.
std::vector<std::filesystem::path> write_plot_data(std::span<const EvaluationRow> pooled_rows,
                                                   const std::filesystem::path& directory);

}  // namespace lmgr
