#pragma once

#include <string>
#include <vector>

#include "p2d2/env.hpp"
#include "p2d2/trajectory.hpp"

namespace p2d2 {

/// A deterministic state-to-action map. Implementations must be pure: the
/// same state always yields the same action.
struct Policy {
  virtual ~Policy() = default;
  virtual ActionVec act(const StateVec& s) const = 0;
  virtual std::string name() const = 0;
};

struct EpisodeStats {
  bool reached_goal = false;  // some visited state satisfied the goal
  double undisc_return = 0.0;
  int steps = 0;
};

struct EvalReport {
  double success_rate = 0.0;
  double mean_undisc_return = 0.0;
  double mean_steps = 0.0;
  int episodes = 0;
  std::vector<EpisodeStats> per_episode;
};

/// Rolls the policy out from s0 for at most horizon steps, stopping early on
/// a terminal state (and on the first goal state when stop_at_goal is set,
/// which makes the result usable as a demonstration for non-terminal goals).
Trajectory rollout_policy(const Policy& policy, const Env& env,
                          const StateVec& s0, double gamma = 0.99,
                          bool stop_at_goal = false);

/// Rolls out `episodes` episodes from sampled initial states. Episode i uses
/// rng.split(i), so the report does not depend on evaluation order. An
/// episode counts as a success if any visited state, initial included, is in
/// the goal set.
EvalReport evaluate_policy(const Policy& policy, const Env& env, int episodes,
                           Rng rng, double gamma = 0.99);

/// Per-episode CSV: episode,reached_goal,undisc_return,steps
std::string eval_episodes_csv(const EvalReport& report);

/// Single-row CSV:
/// policy,env,episodes,success_rate,mean_undisc_return,mean_steps
std::string eval_summary_csv(const EvalReport& report,
                             const std::string& policy_name,
                             const std::string& env_name);

}  // namespace p2d2
