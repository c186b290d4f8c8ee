#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "lmgr/recognition.hpp"

using namespace lmgr;
using testing::action;
using testing::id;
using testing::state;

namespace {

RecognitionConfig filter_on(Heuristic h = Heuristic::Completion) {
  return {Extractor::Exhaustive, h, false};
}
RecognitionConfig filter_off(Heuristic h = Heuristic::Completion) {
  return {Extractor::Exhaustive, h, true};
}

// Goals (at c4a) and (at c4b) on the forked corridor.
RecognitionBundle forked_bundle() {
  RecognitionBundle b;
  b.name = "forked";
  b.domain_name = "corridor";
  b.problem = testing::forked_corridor();
  b.goals = {state(b.problem, {"(at c4a)"}), state(b.problem, {"(at c4b)"})};
  b.true_goal = 0;
  b.observations = {action(b.problem, "(move c1 c2)"), action(b.problem, "(move c2 c3a)"),
                    action(b.problem, "(move c3a c4a)")};
  return b;
}

LandmarkSet set_of(std::vector<std::vector<FactId>> landmarks) {
  LandmarkSet s;
  for (auto& d : landmarks) s.landmarks.push_back({std::move(d), LandmarkCategory::NonTrivial});
  std::sort(s.landmarks.begin(), s.landmarks.end());
  return s;
}

}  // namespace

TEST_SUITE("recognition") {

TEST_CASE("initial-state filter") {
  auto p = testing::corridor();
  auto ls = extract_exhaustive(p, p.goal());
  auto on = effective_landmarks(ls, filter_on());
  CHECK(on.size() == 3);
  CHECK_FALSE(on.contains(Landmark{{id(p, "(at c1)")}}));
  CHECK(effective_landmarks(ls, filter_off()).size() == 4);
  auto trivial = extract_exhaustive(p, state(p, {"(at c1)"}));
  CHECK(effective_landmarks(trivial, filter_on()).size() == 0);
}

TEST_CASE("achieved landmarks follow the observations") {
  auto p = testing::corridor();
  std::vector<LandmarkSet> sets{extract_exhaustive(p, p.goal())};
  std::vector<ActionId> obs{action(p, "(move c1 c2)")};
  auto on = compute_achieved_landmarks(p, sets, obs, filter_on());
  CHECK(on.per_goal[0] == std::vector<Landmark>{Landmark{{id(p, "(at c2)")}}});
  auto off = compute_achieved_landmarks(p, sets, obs, filter_off());
  CHECK(off.per_goal[0] == std::vector<Landmark>{Landmark{{id(p, "(at c1)")}}, Landmark{{id(p, "(at c2)")}}});
  auto none = compute_achieved_landmarks(p, sets, {}, filter_on());
  CHECK(none.per_goal[0].empty());
}

TEST_CASE("completion heuristic") {
  // 4 achieved of 34: dividing by the number of goal facts instead would give
  // 4/5 for a five-fact goal, which is not how the score is defined here.
  CHECK(goal_completion_heuristic(4, 34, false) == Rational(4, 34));
  CHECK(goal_completion_heuristic(0, 7, false) == 0);
  CHECK(goal_completion_heuristic(7, 7, false) == 1);
  CHECK(goal_completion_heuristic(0, 0, true) == 1);
  CHECK(goal_completion_heuristic(0, 0, false) == 0);
}

TEST_CASE("landmark uniqueness") {
  auto a = set_of({{0}, {1}});
  auto b = set_of({{0}});
  auto c = set_of({{0}, {2}});
  std::vector<LandmarkSet> two{a, b};
  std::vector<LandmarkSet> three{a, b, c};
  CHECK(landmark_uniqueness(Landmark{{0}}, two) == Rational(1, 2));
  CHECK(landmark_uniqueness(Landmark{{1}}, two) == 1);
  CHECK(landmark_uniqueness(Landmark{{0}}, three) == Rational(1, 3));
  CHECK_THROWS_AS(landmark_uniqueness(Landmark{{9}}, two), std::invalid_argument);
}

TEST_CASE("uniqueness heuristic") {
  // L_g1 = {A, B}, L_g2 = {A}, AL_g1 = {B}: 1 / (1/2 + 1) = 2/3.
  auto g1 = set_of({{0}, {1}});
  auto g2 = set_of({{0}});
  std::vector<LandmarkSet> sets{g1, g2};
  std::vector<Landmark> achieved{Landmark{{1}}};
  CHECK(uniqueness_heuristic(achieved, g1, sets, false) == Rational(2, 3));
  CHECK(uniqueness_heuristic({}, g1, sets, false) == 0);
  CHECK(uniqueness_heuristic(g1.landmarks, g1, sets, false) == 1);
}

TEST_CASE("forked corridor picks the branch that was taken") {
  auto b = forked_bundle();
  std::span<const ActionId> prefix(b.observations.data(), 2);
  auto r = recognize(b, filter_on(), prefix);
  CHECK(r.recognized == std::vector<std::size_t>{0});
  CHECK(r.scores[0].score == Rational(2, 3));
  CHECK(r.scores[1].score == Rational(1, 3));
}

TEST_CASE("no observations") {
  auto b = forked_bundle();
  auto on = recognize(b, filter_on(), {});
  CHECK(on.recognized == std::vector<std::size_t>{0, 1});
  for (const auto& s : on.scores) CHECK(s.score == 0);
}

TEST_CASE("without the filter fewer landmarks win on an empty prefix") {
  auto p = testing::forked_corridor();
  RecognitionBundle b;
  b.problem = p;
  b.goals = {state(p, {"(at c3a)"}), state(p, {"(at c4b)"})};
  // k = 1 for both goals; l = 2 for (at c3a), 3 for (at c4b).
  auto r = recognize(b, filter_off(), {});
  CHECK(r.scores[0].score == Rational(1, 3));
  CHECK(r.scores[1].score == Rational(1, 4));
  CHECK(r.recognized == std::vector<std::size_t>{0});
}

TEST_CASE("filter-off score equals the shifted ratio") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto p = testing::random_tiny_problem(seed, 10);
    RecognitionBundle b;
    b.problem = p;
    for (FactId f = 0; f < p.num_facts() && b.goals.size() < 3; ++f) {
      if (!p.initial_state().contains(f)) b.goals.push_back(State{f});
    }
    if (b.goals.empty()) continue;
    for (ActionId a = 0; a < p.num_actions(); ++a) b.observations.push_back(a);
    auto sets = extract_all(b, Extractor::RHW);
    auto r = recognize(b, sets, {Extractor::RHW, Heuristic::Completion, true}, b.observations);
    auto al = compute_achieved_landmarks(p, sets, b.observations, {Extractor::RHW, Heuristic::Completion, false});
    for (std::size_t g = 0; g < b.goals.size(); ++g) {
      long long k = 0;
      for (const auto& l : sets[g].landmarks) k += l.category == LandmarkCategory::InitialState;
      long long l = static_cast<long long>(sets[g].size()) - k;
      long long a = static_cast<long long>(al.per_goal[g].size());
      CHECK(r.scores[g].score == Rational(a + k, l + k));
    }
  }
}

TEST_CASE("shifted ratio limits") {
  auto h = [](long long al, long long l, long long k) { return Rational(al + k, l + k); };
  Rational prev = h(2, 7, 0);
  for (long long k : {1LL, 10LL, 1000LL, 1000000LL}) {
    CHECK(h(2, 7, k) > prev);
    prev = h(2, 7, k);
  }
  CHECK(1.0 - static_cast<double>(prev) < 1e-5);
  CHECK(h(0, 0, 4) == 1);
  CHECK(h(0, 1, 4) < h(0, 0, 4));
  CHECK(static_cast<double>(h(0, 400'000'000'000LL, 4)) < 1e-5);
}

TEST_CASE("accrual, bounds and non-empty argmax on random problems") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto p = testing::random_tiny_problem(seed, 10);
    RecognitionBundle b;
    b.problem = p;
    for (FactId f = 0; f < p.num_facts() && b.goals.size() < 4; ++f) b.goals.push_back(State{f});
    for (ActionId a = 0; a < p.num_actions(); ++a) b.observations.push_back(a);
    for (Extractor e : {Extractor::Exhaustive, Extractor::RHW}) {
      auto sets = extract_all(b, e);
      for (Heuristic h : {Heuristic::Completion, Heuristic::Uniqueness}) {
        for (bool init : {false, true}) {
          RecognitionConfig cfg{e, h, init};
          std::vector<std::size_t> prev(b.goals.size(), 0);
          for (std::size_t t = 0; t <= b.observations.size(); ++t) {
            std::span<const ActionId> prefix(b.observations.data(), t);
            auto r = recognize(b, sets, cfg, prefix);
            CHECK_FALSE(r.recognized.empty());
            for (const auto& s : r.scores) {
              CHECK(s.score >= 0);
              CHECK(s.score <= 1);
              CHECK(s.achieved_count >= prev[s.goal_index]);
              prev[s.goal_index] = s.achieved_count;
            }
          }
        }
      }
    }
  }
}

TEST_CASE("filtered scores ignore initial facts that are no landmark") {
  // (lamp) holds initially and is no landmark of either goal; dropping it
  // from s0 must not change any filter-on score.
  auto build = [](bool lamp) {
    std::vector<std::string> init{"(at c1)"};
    if (lamp) init.push_back("(lamp)");
    auto p = testing::make_problem(
        {"(at c1)", "(at c2)", "(at c3a)", "(at c3b)", "(lamp)"}, init,
        {{"(move c1 c2)", {"(at c1)"}, {"(at c2)"}, {"(at c1)"}},
         {"(move c2 c3a)", {"(at c2)"}, {"(at c3a)"}, {"(at c2)"}},
         {"(move c2 c3b)", {"(at c2)"}, {"(at c3b)"}, {"(at c2)"}}},
        {});
    RecognitionBundle b;
    b.problem = p;
    b.goals = {state(p, {"(at c3a)"}), state(p, {"(at c3b)"})};
    b.observations = {action(p, "(move c1 c2)"), action(p, "(move c2 c3b)")};
    return b;
  };
  auto with = build(true);
  auto without = build(false);
  for (Heuristic h : {Heuristic::Completion, Heuristic::Uniqueness}) {
    for (std::size_t t = 0; t <= 2; ++t) {
      auto a = recognize(with, filter_on(h), std::span<const ActionId>(with.observations.data(), t));
      auto b = recognize(without, filter_on(h), std::span<const ActionId>(without.observations.data(), t));
      for (std::size_t g = 0; g < 2; ++g) CHECK(a.scores[g].score == b.scores[g].score);
    }
  }
}

TEST_CASE("fractions print exactly") {
  CHECK(to_fraction_string(Rational(4, 34)) == "2/17");
  CHECK(to_fraction_string(Rational(1)) == "1/1");
  CHECK(to_fraction_string(Rational(0)) == "0/1");
}

TEST_CASE("heuristic names") {
  CHECK(parse_heuristic("completion") == Heuristic::Completion);
  CHECK(parse_heuristic("uniqueness") == Heuristic::Uniqueness);
  CHECK_THROWS_AS(parse_heuristic("goal"), std::invalid_argument);
}

}
