#pragma once

#include <string>

#include "p2d2/planner.hpp"
#include "p2d2/policy.hpp"
#include "p2d2/rff.hpp"

namespace p2d2 {

struct PipelineConfig {
  PlannerConfig planner;
  RffConfig rff;
  int num_demos = 10;
  int eval_episodes = 100;
  int attempt_cap_per_demo = 50;
};

/// Everything one demonstrations-to-policy run produces. The stages run on
/// rng.split(1) / split(2) / split(3), so the whole result is a pure
/// function of (env, config, rng).
struct PipelineResult {
  DemoSet demos;
  RffPolicy policy;
  EvalReport eval;
  double demo_mean_undisc_return = 0.0;
  double demo_mean_length = 0.0;
  bool shortfall = false;
};

/// Collect demonstrations by tree search, fit the regression policy on
/// them, evaluate the policy from fresh starts. Stage errors propagate
/// (for example, a demo set with no state-action pairs fails the fit). A
/// demo shortfall does not abort the run; it is flagged in the result.
PipelineResult end_to_end(const Env& env, const PipelineConfig& config,
                          Rng rng, const Deadline& deadline = Deadline());

/// Single-row CSV:
/// env,demos_requested,demos_collected,shortfall,planner_env_steps,
/// planner_attempts,demo_mean_undisc_return,demo_mean_length,eval_episodes,
/// imitation_success_rate,imitation_mean_return,imitation_mean_steps
std::string pipeline_csv(const PipelineResult& result,
                         const PipelineConfig& config);

}  // namespace p2d2
