#include "p2d2/policy.hpp"

#include <cmath>
#include <stdexcept>

#include "p2d2/util.hpp"

namespace p2d2 {

Trajectory rollout_policy(const Policy& policy, const Env& env,
                          const StateVec& s0, double gamma,
                          bool stop_at_goal) {
  const EnvSpec& spec = env.spec();
  Trajectory traj;
  traj.env_name = spec.name;
  traj.states.push_back(wrap_state(spec, s0));
  for (int t = 0; t < spec.horizon; ++t) {
    const StateVec& s = traj.states.back();
    if (stop_at_goal && env.in_goal(s)) break;
    ActionVec a = spec.action_bounds.clamp(policy.act(s));
    StepResult r = env.step(s, a);
    traj.actions.push_back(std::move(a));
    traj.rewards.push_back(r.reward);
    traj.states.push_back(std::move(r.next_state));
    traj.disc_return += std::pow(gamma, t) * r.reward;
    traj.undisc_return += r.reward;
    if (r.terminal) break;
    if (stop_at_goal && r.in_goal) break;
  }
  traj.success = env.in_goal(traj.states.back());
  return traj;
}

EvalReport evaluate_policy(const Policy& policy, const Env& env, int episodes,
                           Rng rng, double gamma) {
  if (episodes < 1) throw std::invalid_argument("evaluate_policy: episodes must be >= 1");
  EvalReport report;
  report.episodes = episodes;
  report.per_episode.reserve(episodes);
  for (int i = 0; i < episodes; ++i) {
    Rng ep_rng = rng.split(static_cast<std::uint64_t>(i));
    StateVec s0 = env.sample_initial(ep_rng);
    Trajectory traj = rollout_policy(policy, env, s0, gamma);
    EpisodeStats stats;
    stats.undisc_return = traj.undisc_return;
    stats.steps = static_cast<int>(traj.actions.size());
    for (const StateVec& s : traj.states) {
      if (env.in_goal(s)) {
        stats.reached_goal = true;
        break;
      }
    }
    report.per_episode.push_back(stats);
    report.success_rate += stats.reached_goal ? 1.0 : 0.0;
    report.mean_undisc_return += stats.undisc_return;
    report.mean_steps += stats.steps;
  }
  report.success_rate /= episodes;
  report.mean_undisc_return /= episodes;
  report.mean_steps /= episodes;
  return report;
}

std::string eval_episodes_csv(const EvalReport& report) {
  std::string out = "episode,reached_goal,undisc_return,steps\n";
  for (size_t i = 0; i < report.per_episode.size(); ++i) {
    const EpisodeStats& ep = report.per_episode[i];
    out += std::to_string(i) + ',' + (ep.reached_goal ? '1' : '0') + ',' +
           format_double(ep.undisc_return) + ',' + std::to_string(ep.steps) +
           '\n';
  }
  return out;
}

std::string eval_summary_csv(const EvalReport& report,
                             const std::string& policy_name,
                             const std::string& env_name) {
  std::string out =
      "policy,env,episodes,success_rate,mean_undisc_return,mean_steps\n";
  out += policy_name + ',' + env_name + ',' + std::to_string(report.episodes) +
         ',' + format_double(report.success_rate) + ',' +
         format_double(report.mean_undisc_return) + ',' +
         format_double(report.mean_steps) + '\n';
  return out;
}

}  // namespace p2d2
