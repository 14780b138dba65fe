#include "p2d2/pipeline.hpp"

#include <sstream>

namespace p2d2 {

PipelineResult end_to_end(const Env& env, const PipelineConfig& config,
                          Rng rng, const Deadline& deadline) {
  PipelineResult result;
  result.demos = p2d2_collect(env, config.planner, config.num_demos,
                              rng.split(1), config.attempt_cap_per_demo,
                              deadline);
  result.shortfall = result.demos.shortfall;
  for (const Trajectory& t : result.demos.trajectories) {
    result.demo_mean_undisc_return += t.undisc_return;
    result.demo_mean_length += t.length();
  }
  if (!result.demos.trajectories.empty()) {
    result.demo_mean_undisc_return /= result.demos.trajectories.size();
    result.demo_mean_length /= result.demos.trajectories.size();
  }
  result.policy = fit_policy(env, result.demos, config.rff, rng.split(2));
  result.eval = evaluate_policy(result.policy, env, config.eval_episodes,
                                rng.split(3), config.planner.gamma);
  return result;
}

std::string pipeline_csv(const PipelineResult& r, const PipelineConfig& c) {
  std::ostringstream out;
  out << "env,demos_requested,demos_collected,shortfall,planner_env_steps,"
         "planner_attempts,demo_mean_undisc_return,demo_mean_length,"
         "eval_episodes,imitation_success_rate,imitation_mean_return,"
         "imitation_mean_steps\n"
      << r.demos.env_name << ',' << c.num_demos << ','
      << r.demos.trajectories.size() << ',' << (r.shortfall ? "true" : "false")
      << ',' << r.demos.total_env_steps << ',' << r.demos.attempts << ','
      << format_double(r.demo_mean_undisc_return) << ','
      << format_double(r.demo_mean_length) << ',' << r.eval.episodes << ','
      << format_double(r.eval.success_rate) << ','
      << format_double(r.eval.mean_undisc_return) << ','
      << format_double(r.eval.mean_steps) << '\n';
  return out.str();
}

}  // namespace p2d2
