#include "p2d2/trajectory.hpp"

#include <cmath>
#include <sstream>

namespace p2d2 {

namespace {
ValidationReport fail(const std::string& msg) { return {false, msg}; }
}  // namespace

ValidationReport validate_trajectory(const Env& env, const Trajectory& traj,
                                     double gamma, double return_tol) {
  const EnvSpec& spec = env.spec();
  if (traj.states.empty()) return fail("no states");
  if (traj.states.size() != traj.actions.size() + 1) {
    return fail("states/actions length mismatch");
  }
  if (traj.rewards.size() != traj.actions.size()) {
    return fail("rewards/actions length mismatch");
  }
  if (traj.length() > spec.horizon) return fail("longer than horizon");
  if (!traj.env_name.empty() && traj.env_name != spec.name) {
    return fail("environment name mismatch");
  }

  double disc = 0.0;
  double undisc = 0.0;
  for (size_t t = 0; t < traj.actions.size(); ++t) {
    StepResult r = env.step(traj.states[t], traj.actions[t]);
    if (!(r.next_state == traj.states[t + 1])) {
      std::ostringstream msg;
      msg << "transition " << t << " does not replay bit-exactly";
      return fail(msg.str());
    }
    if (r.reward != traj.rewards[t]) {
      std::ostringstream msg;
      msg << "reward " << t << " does not replay";
      return fail(msg.str());
    }
    disc += std::pow(gamma, static_cast<double>(t)) * r.reward;
    undisc += r.reward;
  }
  if (env.goal_terminal()) {
    // A goal state before the final one would have ended the episode there.
    for (size_t t = 0; t + 1 < traj.states.size(); ++t) {
      if (env.in_goal(traj.states[t])) {
        std::ostringstream msg;
        msg << "terminal goal state at interior step " << t;
        return fail(msg.str());
      }
    }
  }
  if (std::abs(disc - traj.disc_return) > return_tol) {
    return fail("discounted return mismatch");
  }
  if (std::abs(undisc - traj.undisc_return) > return_tol) {
    return fail("undiscounted return mismatch");
  }
  if (traj.success && !env.in_goal(traj.states.back())) {
    return fail("flagged success but final state not in goal");
  }
  return {};
}

}  // namespace p2d2
