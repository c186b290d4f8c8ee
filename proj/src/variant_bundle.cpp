#include <json.hpp>

#include "lmgr/bench_tools.hpp"
#include "lmgr/bundle.hpp"
#include "lmgr/pddl.hpp"

namespace lmgr {

namespace fs = std::filesystem;

namespace {

std::vector<Fact> facts_of(const GroundedProblem& p, const State& s) {
  std::vector<Fact> out;
  for (FactId f : s) out.push_back(p.fact(f));
  return out;
}

}  // namespace

VariantReport write_variant_bundle(const fs::path& source, const fs::path& target,
                                   const DatasetVariant& variant, const PlannerOptions& planner) {
  BundleSources src = read_bundle_sources(source);
  std::vector<Fact> goal_facts;
  for (const auto& h : src.hypotheses) goal_facts.insert(goal_facts.end(), h.begin(), h.end());
  GroundedProblem problem = pddl::ground(src.domain, src.problem, goal_facts);

  std::vector<State> original;
  for (const auto& h : src.hypotheses) original.push_back(problem.make_state(h));

  // Independent streams for the three random decisions.
  const std::uint64_t mutate_seed = splitmix64(variant.seed);
  const std::uint64_t select_seed = splitmix64(mutate_seed);
  const std::uint64_t plan_seed = splitmix64(select_seed);

  GoalMutation mutation = mutate_goal_set(original, mutate_seed);
  VariantReport report;
  report.true_goal = select_true_goal(mutation.goals, variant.kind, select_seed);
  Plan plan = plan_observations(problem, mutation.goals[report.true_goal], plan_seed, planner);
  report.plan_length = plan.size();
  report.unmodified_goals = mutation.unmodified;
  for (const auto& g : original) report.original_goal_sizes.push_back(g.size());
  for (const auto& g : mutation.goals) report.goal_sizes.push_back(g.size());

  std::string hyps;
  for (const auto& g : mutation.goals) hyps += format_fact_list(facts_of(problem, g)) + "\n";
  std::string obs;
  for (ActionId a : plan) obs += problem.action(a).to_string() + "\n";

  fs::create_directories(target);
  write_text_file(target / "domain.pddl", read_text_file(source / "domain.pddl"));
  write_text_file(target / "template.pddl", read_text_file(source / "template.pddl"));
  write_text_file(target / "hyps.dat", hyps);
  write_text_file(target / "real_hyp.dat",
                  format_fact_list(facts_of(problem, mutation.goals[report.true_goal])) + "\n");
  write_text_file(target / "obs.dat", obs);

  nlohmann::ordered_json meta;
  meta["domain"] = src.domain.name;
  meta["variant"] = std::string(variant_label(variant.kind));
  meta["seed"] = variant.seed;
  meta["original_goal_sizes"] = report.original_goal_sizes;
  meta["goal_sizes"] = report.goal_sizes;
  meta["unmodified_goals"] = report.unmodified_goals;
  meta["true_goal_index"] = report.true_goal;
  meta["plan_length"] = report.plan_length;
  write_text_file(target / "meta.json", meta.dump(2) + "\n");
  return report;
}

}  // namespace lmgr
