#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmgr/bundle.hpp"
#include "lmgr/landmarks.hpp"

namespace lmgr {

// Scores are exact so that argmax ties are exact.
using Rational = boost::multiprecision::cpp_rational;

enum class Heuristic { Completion, Uniqueness };

std::string_view to_string(Heuristic h);
// "completion"/"gc", "uniqueness"/"uniq". Throws std::invalid_argument.
Heuristic parse_heuristic(std::string_view s);

struct RecognitionConfig {
  Extractor extractor = Extractor::Exhaustive;
  Heuristic heuristic = Heuristic::Completion;
  bool include_initial_state_landmarks = false;

  bool operator==(const RecognitionConfig&) const = default;
};

struct GoalScore {
  std::size_t goal_index = 0;
  Rational score;
  std::size_t achieved_count = 0;
  std::size_t total_count = 0;
};

// AL_g per goal, each sorted.
struct AchievedMap {
  std::vector<std::vector<Landmark>> per_goal;
};

// With the filter on (include_initial_state_landmarks == false) drops every
// InitialState landmark; otherwise returns the set unchanged.
LandmarkSet effective_landmarks(const LandmarkSet& landmarks, const RecognitionConfig& cfg);

// `landmarks[i]` is the extracted (unfiltered) set of goal i. A landmark is
// achieved once some disjunct appears in Pre(o) ∪ Add(o) of an observation.
// With initial-state landmarks included they count as achieved before the
// first observation.
AchievedMap compute_achieved_landmarks(const GroundedProblem& p,
                                       std::span<const LandmarkSet> landmarks,
                                       std::span<const ActionId> observations,
                                       const RecognitionConfig& cfg);

// |AL_g| / |L_g|. An empty effective set scores 1 if the goal already holds
// in s0, else 0.
Rational goal_completion_heuristic(std::size_t achieved, std::size_t total,
                                   bool goal_holds_initially);

// Number of effective sets containing each landmark.
class LandmarkFrequencies {
 public:
  explicit LandmarkFrequencies(std::span<const LandmarkSet> effective_sets);
  std::size_t count(const Landmark& l) const;

 private:
  std::map<std::vector<FactId>, std::size_t> counts_;
};

// 1 / (number of goals whose effective set contains l). Throws
// std::invalid_argument if l occurs in none.
Rational landmark_uniqueness(const Landmark& l, std::span<const LandmarkSet> effective_sets);
Rational landmark_uniqueness(const Landmark& l, const LandmarkFrequencies& freq);

// Σ_{AL_g} uniq / Σ_{L_g} uniq, same empty-set rule as the completion score.
Rational uniqueness_heuristic(std::span<const Landmark> achieved, const LandmarkSet& effective,
                              const LandmarkFrequencies& freq, bool goal_holds_initially);
Rational uniqueness_heuristic(std::span<const Landmark> achieved, const LandmarkSet& effective,
                              std::span<const LandmarkSet> effective_sets,
                              bool goal_holds_initially);

struct RecognitionResult {
  std::vector<GoalScore> scores;
  std::vector<std::size_t> recognized;  // argmax set, ascending, never empty
};

// Scores every candidate goal of `bundle` on `prefix`. `landmarks` are the
// unfiltered per-goal sets produced by cfg.extractor.
RecognitionResult recognize(const RecognitionBundle& bundle, std::span<const LandmarkSet> landmarks,
                            const RecognitionConfig& cfg, std::span<const ActionId> prefix);

// Extracts landmarks with cfg.extractor first.
RecognitionResult recognize(const RecognitionBundle& bundle, const RecognitionConfig& cfg,
                            std::span<const ActionId> prefix);

std::vector<LandmarkSet> extract_all(const RecognitionBundle& bundle, Extractor e);

std::string to_fraction_string(const Rational& r);

}  // namespace lmgr
