#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "lmgr/bench_tools.hpp"

namespace lmgr {

std::string_view variant_label(VariantKind k) {
  switch (k) {
    case VariantKind::Random:
      return "D_R";
    case VariantKind::Longest:
      return "D_L";
    case VariantKind::Shortest:
      return "D_S";
  }
  return "?";
}

VariantKind parse_variant(std::string_view s) {
  if (s == "random" || s == "r" || s == "D_R") return VariantKind::Random;
  if (s == "longest" || s == "l" || s == "D_L") return VariantKind::Longest;
  if (s == "shortest" || s == "s" || s == "D_S") return VariantKind::Shortest;
  throw std::invalid_argument("unknown dataset variant '" + std::string(s) + "'");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index over an empty range");
  const std::uint64_t range = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

bool pairwise_non_subset(const std::vector<State>& goals) {
  for (std::size_t i = 0; i < goals.size(); ++i) {
    for (std::size_t j = 0; j < goals.size(); ++j) {
      if (i != j && goals[i].subset_of(goals[j])) return false;
    }
  }
  return true;
}

namespace {

bool compatible(const std::vector<State>& goals, std::size_t index, const State& candidate) {
  for (std::size_t j = 0; j < goals.size(); ++j) {
    if (j == index) continue;
    if (candidate.subset_of(goals[j]) || goals[j].subset_of(candidate)) return false;
  }
  return true;
}

State random_subset(const State& goal, std::mt19937_64& rng) {
  std::vector<FactId> facts(goal.begin(), goal.end());
  std::size_t k = 1 + uniform_index(rng, facts.size());
  // Partial Fisher-Yates: the first k slots become the sample.
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + uniform_index(rng, facts.size() - i);
    std::swap(facts[i], facts[j]);
  }
  facts.resize(k);
  return State(std::move(facts));
}

}  // namespace

GoalMutation mutate_goal_set(const std::vector<State>& goals, std::uint64_t seed,
                             std::size_t max_retries) {
  if (goals.size() < 2) throw std::invalid_argument("goal mutation needs at least two goals");
  for (const auto& g : goals) {
    if (g.empty()) throw std::invalid_argument("goal mutation needs nonempty goals");
  }
  std::mt19937_64 rng(seed);
  GoalMutation out;
  out.goals = goals;
  for (std::size_t i = 0; i < out.goals.size(); ++i) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < max_retries && !placed; ++attempt) {
      State candidate = random_subset(goals[i], rng);
      if (compatible(out.goals, i, candidate)) {
        out.goals[i] = std::move(candidate);
        placed = true;
      }
    }
    if (!placed) out.unmodified.push_back(i);
  }
  return out;
}

std::size_t select_true_goal(const std::vector<State>& goals, VariantKind kind,
                             std::uint64_t seed) {
  if (goals.empty()) throw std::invalid_argument("no goals to choose from");
  if (kind == VariantKind::Random) {
    std::mt19937_64 rng(seed);
    return uniform_index(rng, goals.size());
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < goals.size(); ++i) {
    const auto a = goals[i].size();
    const auto b = goals[best].size();
    bool better = kind == VariantKind::Longest ? a > b : a < b;
    if (better || (a == b && goals[i] < goals[best])) best = i;
  }
  return best;
}

}  // namespace lmgr
