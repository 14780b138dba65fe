#pragma once

#include <memory>
#include <string>
#include <vector>

#include "p2d2/env.hpp"
#include "p2d2/policy.hpp"

namespace p2d2 {

/// Hand-derived control laws used as demonstration-quality baselines.
///
/// mountaincar: full-throttle in the direction of motion, a = sgn(xdot),
/// with sgn(0) = +1. Guaranteed to reach the goal within the horizon.
///
/// pendulum: energy shaping, a = sgn(thetadot) * e_goal - e_total, where
/// e_total is the rod's kinetic plus potential energy with the potential
/// zero at the pivot, and e_goal is the energy at upright rest. Output is
/// clamped to the torque bounds.
///
/// acrobot and cartpole have no solver here: acrobot's swing-up law comes
/// from Spong (1994), which this project does not implement, and cartpole
/// has no published counterpart in scope. make_expert throws for both.

/// Environments that have an expert, in registry order.
std::vector<std::string> expert_names();

bool expert_available(const std::string& env_name);

/// Builds the expert for the environment; throws std::runtime_error with a
/// not-implemented message for environments without one.
std::unique_ptr<Policy> make_expert(const Env& env);

}  // namespace p2d2
