#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "p2d2/env.hpp"

namespace p2d2 {

/// One rollout: n transitions, n+1 states. Every stored transition replays
/// bit for bit under the deterministic dynamics (validate_trajectory checks
/// this), so a trajectory file is a complete, re-executable record.
struct Trajectory {
  std::vector<StateVec> states;    // length n+1
  std::vector<ActionVec> actions;  // length n
  std::vector<double> rewards;     // length n
  double disc_return = 0.0;
  double undisc_return = 0.0;
  bool success = false;
  std::string env_name;
  std::uint64_t seed = 0;

  int length() const { return static_cast<int>(actions.size()); }
};

struct ValidationReport {
  bool valid = true;
  std::string error;
};

/// Replays a trajectory through the environment and checks:
/// shape consistency; bit-exact successor states and rewards; discounted /
/// undiscounted return bookkeeping within return_tol; length within horizon;
/// success implies the final state satisfies the goal predicate; for
/// terminal-goal environments no interior state is already in the goal
/// (the episode would have ended there).
ValidationReport validate_trajectory(const Env& env, const Trajectory& traj,
                                     double gamma,
                                     double return_tol = 1e-9);

}  // namespace p2d2
