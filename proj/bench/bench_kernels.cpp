// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include <array>
#include <string>

#include "fixtures.hpp"
#include "lmgr/evaluation.hpp"
#include "lmgr/landmarks.hpp"
#include "lmgr/pddl.hpp"
#include "suite.hpp"

using namespace lmgr;

namespace {

// A corridor long enough that per-fact verification dominates.
const GroundedProblem& long_corridor() {
  static GroundedProblem p = [] {
    auto d = pddl::parse_domain(testing::corridor_domain_pddl());
    return pddl::ground(d, pddl::parse_problem(testing::corridor_problem_pddl(400), d));
  }();
  return p;
}

const std::vector<OnlineProblem>& suite() {
  static testing::TempDir base("bench-base");
  static testing::TempDir variants("bench-variants");
  static std::vector<OnlineProblem> problems = [] {
    testing::SuiteOptions o;
    o.problems_per_domain = 10;
    testing::write_base_suite(base.path(), o);
    testing::write_variant_suite(base.path(), variants.path(), {VariantKind::Random}, 3);
    return load_dataset(variants.path());
  }();
  return problems;
}

std::vector<RecognitionConfig> configs() {
  return config_product(std::array{Extractor::Exhaustive, Extractor::RHW},
                        std::array{Heuristic::Completion, Heuristic::Uniqueness},
                        std::array{false, true});
}

void BM_ExtractExhaustiveSerial(benchmark::State& state) {
  const auto& p = long_corridor();
  for (auto _ : state) benchmark::DoNotOptimize(serial::extract_exhaustive(p, p.goal()));
}

void BM_ExtractExhaustiveParallel(benchmark::State& state) {
  const auto& p = long_corridor();
  for (auto _ : state) benchmark::DoNotOptimize(extract_exhaustive(p, p.goal()));
}

void BM_EvaluateSerial(benchmark::State& state) {
  const auto& problems = suite();
  auto cfg = configs();
  for (auto _ : state) benchmark::DoNotOptimize(serial::evaluate(problems, cfg));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto& problems = suite();
  auto cfg = configs();
  EvaluationOptions options;
  options.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(problems, cfg, options));
}

}  // namespace

BENCHMARK(BM_ExtractExhaustiveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractExhaustiveParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateParallel)->Arg(0)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
