#include "p2d2/experts.hpp"

#include <cmath>
#include <stdexcept>

#include "p2d2/envs.hpp"

namespace p2d2 {

namespace {
double sgn(double x) { return x >= 0.0 ? 1.0 : -1.0; }  // sgn(0) = +1

class MountainCarExpert : public Policy {
 public:
  explicit MountainCarExpert(const Env& env) : spec_(env.spec()) {}

  ActionVec act(const StateVec& s) const override {
    ActionVec a(1);
    a[0] = sgn(s[1]) * spec_.action_bounds.upper[0];
    return a;
  }

  std::string name() const override { return "expert[mountaincar]"; }

 private:
  EnvSpec spec_;
};

class PendulumExpert : public Policy {
 public:
  explicit PendulumExpert(const Env& env) : spec_(env.spec()) {}

  ActionVec act(const StateVec& s) const override {
    ActionVec a(1);
    a[0] = sgn(s[1]) * goal_energy() - total_energy(s);
    return spec_.action_bounds.clamp(a);
  }

  std::string name() const override { return "expert[pendulum]"; }

 private:
  // Uniform rod pivoting at one end: moment of inertia m l^2 / 3, center of
  // mass at l/2. Potential zero at the pivot, so upright rest has energy
  // m g l / 2 and hanging rest -m g l / 2.
  static double total_energy(const StateVec& s) {
    const double m = PendulumEnv::kMass;
    const double l = PendulumEnv::kLength;
    const double g = PendulumEnv::kGravity;
    const double kinetic = 0.5 * (m * l * l / 3.0) * s[1] * s[1];
    const double potential = m * g * (l / 2.0) * std::cos(s[0]);
    return kinetic + potential;
  }

  static double goal_energy() {
    return PendulumEnv::kMass * PendulumEnv::kGravity * PendulumEnv::kLength /
           2.0;
  }

  EnvSpec spec_;
};
}  // namespace

std::vector<std::string> expert_names() { return {"mountaincar", "pendulum"}; }

bool expert_available(const std::string& env_name) {
  for (const std::string& name : expert_names()) {
    if (name == env_name) return true;
  }
  return false;
}

std::unique_ptr<Policy> make_expert(const Env& env) {
  const std::string& name = env.spec().name;
  if (name == "mountaincar") return std::make_unique<MountainCarExpert>(env);
  if (name == "pendulum") return std::make_unique<PendulumExpert>(env);
  if (name == "acrobot") {
    throw std::runtime_error(
        "expert not implemented for 'acrobot': the swing-up law is the one "
        "described by Spong (1994), which this project does not include");
  }
  throw std::runtime_error("expert not implemented for '" + name + "'");
}

}  // namespace p2d2
