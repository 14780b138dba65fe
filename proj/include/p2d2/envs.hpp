#pragma once

#include <memory>
#include <string>
#include <vector>

#include "p2d2/env.hpp"

namespace p2d2 {

/// Sparse-reward continuous mountain car. State [x, xdot], action engine
/// force in [-1, 1]. Goal x >= 0.45 ends the episode; every transition pays
/// -1.
class MountainCarEnv final : public Env {
 public:
  static constexpr double kMinPosition = -1.2;
  static constexpr double kMaxPosition = 0.6;
  static constexpr double kMaxSpeed = 0.07;
  static constexpr double kGoalPosition = 0.45;
  static constexpr double kPower = 0.0015;
  static constexpr double kGravityScale = 0.0025;
  static constexpr double kStartLow = -0.6;
  static constexpr double kStartHigh = -0.4;

  MountainCarEnv();

  StateVec sample_initial(Rng& rng) const override;
  StateVec sample_goal(Rng& rng) const override;
  bool in_goal(const StateVec& s) const override;
  bool goal_terminal() const override { return true; }
  std::vector<std::pair<std::string, double>> constants() const override;

 protected:
  StepResult dynamics(const StateVec& s, const ActionVec& a) const override;
};

/// Torque-limited pendulum swing-up, theta measured from upright. State
/// [theta, thetadot], action torque in [-2, 2]. Goal cos(theta) > 0.99 is
/// non-terminal and rewards cos(theta); every other transition pays -1.
class PendulumEnv final : public Env {
 public:
  static constexpr double kGravity = 10.0;
  static constexpr double kMass = 1.0;
  static constexpr double kLength = 1.0;
  static constexpr double kDt = 0.05;
  static constexpr double kMaxTorque = 2.0;
  static constexpr double kMaxSpeed = 8.0;
  static constexpr double kGoalCos = 0.99;

  PendulumEnv();

  StateVec sample_initial(Rng& rng) const override;
  StateVec sample_goal(Rng& rng) const override;
  bool in_goal(const StateVec& s) const override;
  bool goal_terminal() const override { return false; }
  std::vector<std::pair<std::string, double>> constants() const override;

 protected:
  StepResult dynamics(const StateVec& s, const ActionVec& a) const override;
};

/// Two-link underactuated acrobot, torque on the second joint, continuous
/// action in [-1, 1]. State [theta0, theta1, dtheta0, dtheta1] with theta0
/// measured from the hanging position. Goal: tip height
/// -cos(theta0) - cos(theta0 + theta1) > 1.9, terminal. Reward -1 per step.
class AcrobotEnv final : public Env {
 public:
  static constexpr double kLinkLength1 = 1.0;
  static constexpr double kLinkMass1 = 1.0;
  static constexpr double kLinkMass2 = 1.0;
  static constexpr double kLinkCom1 = 0.5;
  static constexpr double kLinkCom2 = 0.5;
  static constexpr double kLinkMoi = 1.0;
  static constexpr double kGravity = 9.8;
  static constexpr double kDt = 0.2;
  static constexpr double kTorqueScale = 1.0;
  static constexpr double kGoalHeight = 1.9;

  AcrobotEnv();

  StateVec sample_initial(Rng& rng) const override;
  StateVec sample_goal(Rng& rng) const override;
  bool in_goal(const StateVec& s) const override;
  bool goal_terminal() const override { return true; }
  std::vector<std::pair<std::string, double>> constants() const override;

  /// Tip height -cos(theta0) - cos(theta0 + theta1) in link lengths.
  static double tip_height(const StateVec& s);

 protected:
  StepResult dynamics(const StateVec& s, const ActionVec& a) const override;
};

/// Cart-pole swing-up: starts hanging, goal cos(theta) > 0.9 is non-terminal
/// with reward cos(theta). State [x, theta, xdot, thetadot], action force in
/// [-1, 1] scaled by kForceMag. Hitting the rail clamps x and zeroes xdot.
class CartpoleSwingupEnv final : public Env {
 public:
  static constexpr double kGravity = 9.8;
  static constexpr double kMassCart = 1.0;
  static constexpr double kMassPole = 0.1;
  static constexpr double kPoleHalfLength = 0.5;
  static constexpr double kForceMag = 10.0;
  static constexpr double kDt = 0.02;
  static constexpr double kRailHalfLength = 2.4;
  static constexpr double kMaxLinVel = 10.0;
  static constexpr double kMaxAngVel = 4.0 * 3.14159265358979323846;
  static constexpr double kGoalCos = 0.9;
  static constexpr double kStartJitter = 0.05;

  CartpoleSwingupEnv();

  StateVec sample_initial(Rng& rng) const override;
  StateVec sample_goal(Rng& rng) const override;
  bool in_goal(const StateVec& s) const override;
  bool goal_terminal() const override { return false; }
  std::vector<std::pair<std::string, double>> constants() const override;

 protected:
  StepResult dynamics(const StateVec& s, const ActionVec& a) const override;
};

/// Registered environment names, in registry order.
std::vector<std::string> env_names();

/// Construct an environment by registry name ("mountaincar", "pendulum",
/// "acrobot", "cartpole_swingup"). Throws std::invalid_argument for unknown
/// names.
std::unique_ptr<Env> make_env(const std::string& name);

/// Human-readable constants dump (one "name = value" line per constant,
/// including spec geometry). Hashed for file integrity checks.
std::string constants_report(const Env& env);

/// FNV-1a hash of constants_report, stored in persisted files and checked on
/// load.
std::string constants_hash(const Env& env);

}  // namespace p2d2
