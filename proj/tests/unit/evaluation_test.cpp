#include <doctest.h>

#include <array>
#include <numeric>

#include "fixtures.hpp"
#include "lmgr/error.hpp"
#include "lmgr/evaluation.hpp"
#include "suite.hpp"

using namespace lmgr;
using testing::action;
using testing::state;
namespace fs = std::filesystem;

namespace {

OnlineProblem forked_problem(std::size_t true_goal, std::string domain = "corridor") {
  OnlineProblem op;
  op.domain = std::move(domain);
  op.variant = "D_R";
  auto& b = op.bundle;
  b.name = "forked-" + std::to_string(true_goal);
  b.problem = testing::forked_corridor();
  b.goals = {state(b.problem, {"(at c4a)"}), state(b.problem, {"(at c4b)"})};
  b.true_goal = true_goal;
  b.observations = {action(b.problem, "(move c1 c2)"), action(b.problem, "(move c2 c3a)"),
                    action(b.problem, "(move c3a c4a)")};
  return op;
}

RecognitionResult recognized(std::vector<std::size_t> goals) {
  RecognitionResult r;
  r.recognized = std::move(goals);
  return r;
}

std::vector<RecognitionConfig> all_configs() {
  return config_product(std::array{Extractor::Exhaustive, Extractor::RHW},
                        std::array{Heuristic::Completion, Heuristic::Uniqueness},
                        std::array{false, true});
}

// A small shared suite, generated once.
const std::vector<OnlineProblem>& small_suite() {
  static testing::TempDir base("eval-base");
  static testing::TempDir variants("eval-variants");
  static std::vector<OnlineProblem> problems = [] {
    testing::SuiteOptions o;
    o.problems_per_domain = 4;
    testing::write_base_suite(base.path(), o);
    testing::write_variant_suite(base.path(), variants.path(),
                                 {VariantKind::Random, VariantKind::Longest}, 11);
    return load_dataset(variants.path());
  }();
  return problems;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("prefix length") {
  CHECK(prefix_length(7, 0.3) == 2);
  CHECK(prefix_length(10, 1.0) == 10);
  CHECK(prefix_length(5, 0.1) == 0);
  CHECK(prefix_length(10, 0.3) == 3);
  CHECK(prefix_length(10, 0.7) == 7);
  CHECK_THROWS_AS(prefix_length(10, 1.5), std::invalid_argument);
}

TEST_CASE("prefixes grow with lambda") {
  auto op = forked_problem(0);
  auto grid = default_lambda_grid();
  CHECK(grid.size() == 10);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    auto a = observation_prefix(op, grid[i - 1]);
    auto b = observation_prefix(op, grid[i]);
    REQUIRE(a.size() <= b.size());
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST_CASE("problem precision") {
  CHECK(problem_precision(recognized({0}), 0) == 1);
  CHECK(problem_precision(recognized({0, 1}), 1) == Rational(1, 2));
  Rational mixed = (problem_precision(recognized({0, 1}), 0) + problem_precision(recognized({1}), 0)) / 2;
  CHECK(mixed == Rational(1, 4));
}

TEST_CASE("dataset precision") {
  std::vector<OnlineProblem> hit{forked_problem(0)};
  RecognitionConfig cfg{Extractor::Exhaustive, Heuristic::Completion, false};
  CHECK(precision(1.0, hit, cfg) == 1.0);
  // Empty prefix under the filter: both goals tie.
  CHECK(precision(0.1, hit, cfg) == 0.5);
  std::vector<OnlineProblem> pair{forked_problem(0), forked_problem(1)};
  CHECK(precision(1.0, pair, cfg) == 0.5);
  CHECK_THROWS_AS(precision(1.0, std::vector<OnlineProblem>{}, cfg), std::invalid_argument);
}

TEST_CASE("row count and aggregation identity") {
  std::vector<OnlineProblem> one{forked_problem(0)};
  std::vector<RecognitionConfig> configs{{Extractor::Exhaustive, Heuristic::Completion, false},
                                         {Extractor::Exhaustive, Heuristic::Completion, true}};
  auto rows = evaluate(one, configs);
  CHECK(rows.size() == 20);
  for (const auto& r : rows) {
    RecognitionConfig cfg{r.extractor, r.heuristic, r.include_init};
    CHECK(r.precision == precision(r.lambda, one, cfg));
    CHECK(r.n_problems == 1);
    CHECK(r.precision >= 0.0);
    CHECK(r.precision <= 1.0);
  }
  CHECK(std::is_sorted(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.include_init, a.lambda) < std::tie(b.include_init, b.lambda);
  }));
}

TEST_CASE("config product is sorted and unique") {
  auto configs = config_product(std::array{Extractor::RHW, Extractor::Exhaustive, Extractor::RHW},
                                std::array{Heuristic::Completion}, std::array{true, false});
  CHECK(configs.size() == 4);
  CHECK(configs.front().extractor == Extractor::Exhaustive);
  CHECK(configs.front().include_initial_state_landmarks == false);
}

TEST_CASE("caching, threading and the serial reference agree") {
  const auto& problems = small_suite();
  REQUIRE(problems.size() == 24);
  auto configs = all_configs();
  EvaluationOptions cached;
  EvaluationOptions uncached;
  uncached.cache_landmarks = false;
  EvaluationOptions threaded;
  threaded.jobs = 4;
  auto a = to_csv(evaluate(problems, configs, cached));
  CHECK(a == to_csv(evaluate(problems, configs, uncached)));
  CHECK(a == to_csv(evaluate(problems, configs, threaded)));
  CHECK(a == to_csv(serial::evaluate(problems, configs, cached)));
}

TEST_CASE("csv layout") {
  const auto& problems = small_suite();
  auto rows = evaluate(problems, all_configs());
  CHECK(rows.size() == 3 * 2 * 8 * 10);
  auto csv = to_csv(rows);
  CHECK(csv.rfind("domain,variant,extractor,heuristic,include_init,lambda,precision,n_problems\n", 0) == 0);
  CHECK(csv.find(",D_L,ex,completion,false,0.100000,") != std::string::npos);
}

TEST_CASE("pooled rows and plot data") {
  const auto& problems = small_suite();
  auto pooled = pool_domains(evaluate(problems, all_configs()));
  CHECK(pooled.size() == 2 * 8 * 10);
  for (const auto& r : pooled) {
    CHECK(r.domain == "all");
    CHECK(r.n_problems == 12);
  }
  testing::TempDir out("plot");
  auto files = write_plot_data(pooled, out.path());
  CHECK(files.size() == 4);
  auto text = read_text_file(out.path() / "D_R_completion.dat");
  CHECK(text.rfind("# lambda ex ex-init rhw rhw-init\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 11);
}

TEST_CASE("load errors name the bundle") {
  testing::TempDir dir("eval-bad");
  testing::write_bundle(dir.path() / "broken", testing::corridor_domain_pddl(),
                        testing::corridor_problem_pddl(3), {"(at c3)", "(at c2)"}, "(at c3)",
                        {"(move c1 c5)"});
  try {
    load_dataset(dir.path());
    FAIL("expected a bundle error");
  } catch (const BundleError& e) {
    CHECK(std::string(e.what()).find("broken") != std::string::npos);
  }
  testing::TempDir empty("eval-empty");
  CHECK_THROWS_AS(load_dataset(empty.path()), BundleError);
}

}
