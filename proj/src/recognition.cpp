#include "lmgr/recognition.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace lmgr {

std::string_view to_string(Heuristic h) {
  return h == Heuristic::Completion ? "completion" : "uniqueness";
}

Heuristic parse_heuristic(std::string_view s) {
  if (s == "completion" || s == "gc") return Heuristic::Completion;
  if (s == "uniqueness" || s == "uniq") return Heuristic::Uniqueness;
  throw std::invalid_argument("unknown heuristic '" + std::string(s) + "'");
}

LandmarkSet effective_landmarks(const LandmarkSet& landmarks, const RecognitionConfig& cfg) {
  if (cfg.include_initial_state_landmarks) return landmarks;
  LandmarkSet out;
  out.goal = landmarks.goal;
  out.extractor = landmarks.extractor;
  std::copy_if(landmarks.landmarks.begin(), landmarks.landmarks.end(),
               std::back_inserter(out.landmarks),
               [](const Landmark& l) { return l.category != LandmarkCategory::InitialState; });
  return out;
}

AchievedMap compute_achieved_landmarks(const GroundedProblem& p,
                                       std::span<const LandmarkSet> landmarks,
                                       std::span<const ActionId> observations,
                                       const RecognitionConfig& cfg) {
  // Facts touched by the observations: ∪ Pre(o) ∪ Add(o).
  std::vector<char> touched(p.num_facts(), 0);
  for (ActionId o : observations) {
    const Action& a = p.action(o);
    for (FactId f : a.pre) touched[f] = 1;
    for (FactId f : a.add) touched[f] = 1;
  }

  AchievedMap out;
  out.per_goal.reserve(landmarks.size());
  for (const auto& set : landmarks) {
    std::vector<Landmark> achieved;
    for (const auto& l : set.landmarks) {
      if (l.category == LandmarkCategory::InitialState) {
        if (cfg.include_initial_state_landmarks) achieved.push_back(l);
        continue;
      }
      if (std::any_of(l.disjuncts.begin(), l.disjuncts.end(),
                      [&](FactId f) { return touched[f] != 0; })) {
        achieved.push_back(l);
      }
    }
    out.per_goal.push_back(std::move(achieved));
  }
  return out;
}

Rational goal_completion_heuristic(std::size_t achieved, std::size_t total,
                                   bool goal_holds_initially) {
  if (total == 0) return Rational(goal_holds_initially ? 1 : 0);
  return Rational(achieved, total);
}

LandmarkFrequencies::LandmarkFrequencies(std::span<const LandmarkSet> effective_sets) {
  for (const auto& set : effective_sets) {
    for (const auto& l : set.landmarks) ++counts_[l.disjuncts];
  }
}

std::size_t LandmarkFrequencies::count(const Landmark& l) const {
  auto it = counts_.find(l.disjuncts);
  return it == counts_.end() ? 0 : it->second;
}

Rational landmark_uniqueness(const Landmark& l, const LandmarkFrequencies& freq) {
  std::size_t n = freq.count(l);
  if (n == 0) throw std::invalid_argument("landmark does not occur in any landmark set");
  return Rational(1, n);
}

Rational landmark_uniqueness(const Landmark& l, std::span<const LandmarkSet> effective_sets) {
  return landmark_uniqueness(l, LandmarkFrequencies(effective_sets));
}

Rational uniqueness_heuristic(std::span<const Landmark> achieved, const LandmarkSet& effective,
                              const LandmarkFrequencies& freq, bool goal_holds_initially) {
  if (effective.landmarks.empty()) return Rational(goal_holds_initially ? 1 : 0);
  // Sum 1/count with a common denominator: lcm of the counts involved.
  boost::multiprecision::cpp_int denom = 1;
  for (const auto& l : effective.landmarks) {
    denom = boost::multiprecision::lcm(denom, boost::multiprecision::cpp_int(freq.count(l)));
  }
  auto weight = [&](const Landmark& l) {
    std::size_t n = freq.count(l);
    if (n == 0) throw std::invalid_argument("landmark does not occur in any landmark set");
    return boost::multiprecision::cpp_int(denom / n);
  };
  boost::multiprecision::cpp_int num = 0;
  boost::multiprecision::cpp_int den = 0;
  for (const auto& l : achieved) num += weight(l);
  for (const auto& l : effective.landmarks) den += weight(l);
  return Rational(num, den);
}

Rational uniqueness_heuristic(std::span<const Landmark> achieved, const LandmarkSet& effective,
                              std::span<const LandmarkSet> effective_sets,
                              bool goal_holds_initially) {
  return uniqueness_heuristic(achieved, effective, LandmarkFrequencies(effective_sets),
                              goal_holds_initially);
}

RecognitionResult recognize(const RecognitionBundle& bundle, std::span<const LandmarkSet> landmarks,
                            const RecognitionConfig& cfg, std::span<const ActionId> prefix) {
  if (bundle.goals.empty()) throw std::invalid_argument("bundle has no candidate goals");
  if (landmarks.size() != bundle.goals.size()) {
    throw std::invalid_argument("one landmark set per candidate goal is required");
  }
  std::vector<LandmarkSet> effective;
  effective.reserve(landmarks.size());
  for (const auto& set : landmarks) effective.push_back(effective_landmarks(set, cfg));
  AchievedMap achieved = compute_achieved_landmarks(bundle.problem, landmarks, prefix, cfg);

  std::optional<LandmarkFrequencies> freq;
  if (cfg.heuristic == Heuristic::Uniqueness) freq.emplace(effective);

  RecognitionResult result;
  for (std::size_t g = 0; g < bundle.goals.size(); ++g) {
    bool holds = bundle.goals[g].subset_of(bundle.problem.initial_state());
    GoalScore s;
    s.goal_index = g;
    s.achieved_count = achieved.per_goal[g].size();
    s.total_count = effective[g].size();
    s.score = cfg.heuristic == Heuristic::Completion
                  ? goal_completion_heuristic(s.achieved_count, s.total_count, holds)
                  : uniqueness_heuristic(achieved.per_goal[g], effective[g], *freq, holds);
    result.scores.push_back(std::move(s));
  }

  Rational best = result.scores.front().score;
  for (const auto& s : result.scores) best = std::max(best, s.score);
  for (const auto& s : result.scores) {
    if (s.score == best) result.recognized.push_back(s.goal_index);
  }
  return result;
}

std::vector<LandmarkSet> extract_all(const RecognitionBundle& bundle, Extractor e) {
  std::vector<LandmarkSet> sets;
  sets.reserve(bundle.goals.size());
  for (const auto& g : bundle.goals) sets.push_back(extract(bundle.problem, g, e));
  return sets;
}

RecognitionResult recognize(const RecognitionBundle& bundle, const RecognitionConfig& cfg,
                            std::span<const ActionId> prefix) {
  auto sets = extract_all(bundle, cfg.extractor);
  return recognize(bundle, sets, cfg, prefix);
}

std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

}  // namespace lmgr
