#include "p2d2/envs.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "p2d2/util.hpp"

namespace p2d2 {

namespace {
constexpr double kPi = std::numbers::pi;

EnvSpec mountaincar_spec() {
  EnvSpec spec;
  spec.name = "mountaincar";
  spec.state_dim = 2;
  spec.action_dim = 1;
  spec.state_bounds = BoundsBox::of({MountainCarEnv::kMinPosition, -MountainCarEnv::kMaxSpeed},
                                    {MountainCarEnv::kMaxPosition, MountainCarEnv::kMaxSpeed});
  spec.action_bounds = BoundsBox::of({-1.0}, {1.0});
  spec.horizon = 200;
  return spec;
}

EnvSpec pendulum_spec() {
  EnvSpec spec;
  spec.name = "pendulum";
  spec.state_dim = 2;
  spec.action_dim = 1;
  spec.state_bounds = BoundsBox::of({-kPi, -PendulumEnv::kMaxSpeed},
                                    {kPi, PendulumEnv::kMaxSpeed});
  spec.action_bounds = BoundsBox::of({-PendulumEnv::kMaxTorque}, {PendulumEnv::kMaxTorque});
  spec.horizon = 100;
  spec.angular_dims = {0};
  return spec;
}

EnvSpec acrobot_spec() {
  EnvSpec spec;
  spec.name = "acrobot";
  spec.state_dim = 4;
  spec.action_dim = 1;
  spec.state_bounds = BoundsBox::of({-kPi, -kPi, -4.0 * kPi, -9.0 * kPi},
                                    {kPi, kPi, 4.0 * kPi, 9.0 * kPi});
  spec.action_bounds = BoundsBox::of({-1.0}, {1.0});
  spec.horizon = 500;
  spec.angular_dims = {0, 1};
  return spec;
}

EnvSpec cartpole_spec() {
  EnvSpec spec;
  spec.name = "cartpole_swingup";
  spec.state_dim = 4;
  spec.action_dim = 1;
  spec.state_bounds =
      BoundsBox::of({-CartpoleSwingupEnv::kRailHalfLength, -kPi,
                     -CartpoleSwingupEnv::kMaxLinVel, -CartpoleSwingupEnv::kMaxAngVel},
                    {CartpoleSwingupEnv::kRailHalfLength, kPi,
                     CartpoleSwingupEnv::kMaxLinVel, CartpoleSwingupEnv::kMaxAngVel});
  spec.action_bounds = BoundsBox::of({-1.0}, {1.0});
  spec.horizon = 500;
  spec.angular_dims = {1};
  return spec;
}

double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}
}  // namespace

// ---------------------------------------------------------------------------
// MountainCar

MountainCarEnv::MountainCarEnv() : Env(mountaincar_spec()) {}

StepResult MountainCarEnv::dynamics(const StateVec& s, const ActionVec& a) const {
  double x = s[0];
  double v = s[1];
  double force = a[0];

  v += force * kPower - kGravityScale * std::cos(3.0 * x);
  v = clamp(v, -kMaxSpeed, kMaxSpeed);
  x += v;
  x = clamp(x, kMinPosition, kMaxPosition);
  if (x == kMinPosition && v < 0.0) v = 0.0;

  StepResult res;
  res.next_state = StateVec(2);
  res.next_state << x, v;
  res.reward = -1.0;
  return res;
}

StateVec MountainCarEnv::sample_initial(Rng& rng) const {
  StateVec s(2);
  s << rng.uniform(kStartLow, kStartHigh), 0.0;
  return s;
}

StateVec MountainCarEnv::sample_goal(Rng& rng) const {
  StateVec s(2);
  s << rng.uniform(kGoalPosition, kMaxPosition), rng.uniform(-kMaxSpeed, kMaxSpeed);
  return s;
}

bool MountainCarEnv::in_goal(const StateVec& s) const {
  return s[0] >= kGoalPosition;
}

std::vector<std::pair<std::string, double>> MountainCarEnv::constants() const {
  return {{"min_position", kMinPosition}, {"max_position", kMaxPosition},
          {"max_speed", kMaxSpeed},       {"goal_position", kGoalPosition},
          {"power", kPower},              {"gravity_scale", kGravityScale},
          {"start_low", kStartLow},       {"start_high", kStartHigh}};
}

// ---------------------------------------------------------------------------
// Pendulum

PendulumEnv::PendulumEnv() : Env(pendulum_spec()) {}

StepResult PendulumEnv::dynamics(const StateVec& s, const ActionVec& a) const {
  double th = s[0];
  double thdot = s[1];
  double torque = a[0];

  // Semi-implicit Euler, rod pivoting at one end, theta from upright.
  double acc = 3.0 * kGravity / (2.0 * kLength) * std::sin(th) +
               3.0 / (kMass * kLength * kLength) * torque;
  double new_thdot = clamp(thdot + acc * kDt, -kMaxSpeed, kMaxSpeed);
  double new_th = th + new_thdot * kDt;

  StepResult res;
  res.next_state = StateVec(2);
  res.next_state << new_th, new_thdot;
  double c = std::cos(new_th);
  res.reward = c > kGoalCos ? c : -1.0;
  return res;
}

StateVec PendulumEnv::sample_initial(Rng& rng) const {
  StateVec s(2);
  s << rng.uniform(-kPi, kPi), rng.uniform(-1.0, 1.0);
  return s;
}

StateVec PendulumEnv::sample_goal(Rng& rng) const {
  double half = std::acos(kGoalCos);
  StateVec s(2);
  s << rng.uniform(-half, half), rng.uniform(-kMaxSpeed, kMaxSpeed);
  if (!in_goal(s)) s[0] = 0.0;  // boundary draw
  return s;
}

bool PendulumEnv::in_goal(const StateVec& s) const {
  return std::cos(s[0]) > kGoalCos;
}

std::vector<std::pair<std::string, double>> PendulumEnv::constants() const {
  return {{"gravity", kGravity},   {"mass", kMass},
          {"length", kLength},     {"dt", kDt},
          {"max_torque", kMaxTorque}, {"max_speed", kMaxSpeed},
          {"goal_cos", kGoalCos}};
}

// ---------------------------------------------------------------------------
// Acrobot

AcrobotEnv::AcrobotEnv() : Env(acrobot_spec()) {}

double AcrobotEnv::tip_height(const StateVec& s) {
  return -std::cos(s[0]) - std::cos(s[0] + s[1]);
}

namespace {
// Time derivative of [theta0, theta1, dtheta0, dtheta1] for a given torque.
Eigen::Vector4d acrobot_derivs(const Eigen::Vector4d& s, double torque) {
  const double m1 = AcrobotEnv::kLinkMass1, m2 = AcrobotEnv::kLinkMass2;
  const double l1 = AcrobotEnv::kLinkLength1;
  const double lc1 = AcrobotEnv::kLinkCom1, lc2 = AcrobotEnv::kLinkCom2;
  const double i1 = AcrobotEnv::kLinkMoi, i2 = AcrobotEnv::kLinkMoi;
  const double g = AcrobotEnv::kGravity;

  double th1 = s[0], th2 = s[1], dth1 = s[2], dth2 = s[3];
  double d1 = m1 * lc1 * lc1 +
              m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * std::cos(th2)) +
              i1 + i2;
  double d2 = m2 * (lc2 * lc2 + l1 * lc2 * std::cos(th2)) + i2;
  double phi2 = m2 * lc2 * g * std::cos(th1 + th2 - kPi / 2.0);
  double phi1 = -m2 * l1 * lc2 * dth2 * dth2 * std::sin(th2) -
                2.0 * m2 * l1 * lc2 * dth2 * dth1 * std::sin(th2) +
                (m1 * lc1 + m2 * l1) * g * std::cos(th1 - kPi / 2.0) + phi2;
  double ddth2 =
      (torque + d2 / d1 * phi1 - m2 * l1 * lc2 * dth1 * dth1 * std::sin(th2) -
       phi2) /
      (m2 * lc2 * lc2 + i2 - d2 * d2 / d1);
  double ddth1 = -(d2 * ddth2 + phi1) / d1;
  return {dth1, dth2, ddth1, ddth2};
}
}  // namespace

StepResult AcrobotEnv::dynamics(const StateVec& s, const ActionVec& a) const {
  double torque = a[0] * kTorqueScale;
  Eigen::Vector4d y = s.head<4>();

  // One classical RK4 step over the control interval.
  const double h = kDt;
  Eigen::Vector4d k1 = acrobot_derivs(y, torque);
  Eigen::Vector4d k2 = acrobot_derivs(y + 0.5 * h * k1, torque);
  Eigen::Vector4d k3 = acrobot_derivs(y + 0.5 * h * k2, torque);
  Eigen::Vector4d k4 = acrobot_derivs(y + h * k3, torque);
  Eigen::Vector4d out = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  StepResult res;
  res.next_state = StateVec(4);
  res.next_state << out[0], out[1],
      clamp(out[2], -4.0 * kPi, 4.0 * kPi),
      clamp(out[3], -9.0 * kPi, 9.0 * kPi);
  res.reward = -1.0;
  return res;
}

StateVec AcrobotEnv::sample_initial(Rng& rng) const {
  StateVec s(4);
  for (int i = 0; i < 4; ++i) s[i] = rng.uniform(-0.1, 0.1);
  return s;
}

StateVec AcrobotEnv::sample_goal(Rng& rng) const {
  // The goal region couples the two angles; rejection-sample them.
  StateVec s(4);
  for (int tries = 0; tries < 100000; ++tries) {
    s[0] = rng.uniform(-kPi, kPi);
    s[1] = rng.uniform(-kPi, kPi);
    s[2] = rng.uniform(spec_.state_bounds.lower[2], spec_.state_bounds.upper[2]);
    s[3] = rng.uniform(spec_.state_bounds.lower[3], spec_.state_bounds.upper[3]);
    if (in_goal(s)) return s;
  }
  s[0] = kPi;
  s[1] = 0.0;
  return s;
}

bool AcrobotEnv::in_goal(const StateVec& s) const {
  return tip_height(s) > kGoalHeight;
}

std::vector<std::pair<std::string, double>> AcrobotEnv::constants() const {
  return {{"link_length_1", kLinkLength1}, {"link_mass_1", kLinkMass1},
          {"link_mass_2", kLinkMass2},     {"link_com_1", kLinkCom1},
          {"link_com_2", kLinkCom2},       {"link_moi", kLinkMoi},
          {"gravity", kGravity},           {"dt", kDt},
          {"torque_scale", kTorqueScale},  {"goal_height", kGoalHeight}};
}

// ---------------------------------------------------------------------------
// Cartpole swing-up

CartpoleSwingupEnv::CartpoleSwingupEnv() : Env(cartpole_spec()) {}

StepResult CartpoleSwingupEnv::dynamics(const StateVec& s, const ActionVec& a) const {
  const double total_mass = kMassCart + kMassPole;
  const double pml = kMassPole * kPoleHalfLength;

  double x = s[0], th = s[1], xdot = s[2], thdot = s[3];
  double force = a[0] * kForceMag;

  double costh = std::cos(th);
  double sinth = std::sin(th);
  double temp = (force + pml * thdot * thdot * sinth) / total_mass;
  double thacc = (kGravity * sinth - costh * temp) /
                 (kPoleHalfLength * (4.0 / 3.0 - kMassPole * costh * costh / total_mass));
  double xacc = temp - pml * thacc * costh / total_mass;

  double nx = x + kDt * xdot;
  double nxdot = clamp(xdot + kDt * xacc, -kMaxLinVel, kMaxLinVel);
  double nth = th + kDt * thdot;
  double nthdot = clamp(thdot + kDt * thacc, -kMaxAngVel, kMaxAngVel);

  // Rail bounds arrest linear movement instead of failing the episode.
  if (nx <= -kRailHalfLength) {
    nx = -kRailHalfLength;
    if (nxdot < 0.0) nxdot = 0.0;
  } else if (nx >= kRailHalfLength) {
    nx = kRailHalfLength;
    if (nxdot > 0.0) nxdot = 0.0;
  }

  StepResult res;
  res.next_state = StateVec(4);
  res.next_state << nx, nth, nxdot, nthdot;
  double c = std::cos(nth);
  res.reward = c > kGoalCos ? c : -1.0;
  return res;
}

StateVec CartpoleSwingupEnv::sample_initial(Rng& rng) const {
  StateVec s(4);
  s[0] = rng.uniform(-kStartJitter, kStartJitter);
  s[1] = wrap_angle(kPi + rng.uniform(-kStartJitter, kStartJitter));
  s[2] = rng.uniform(-kStartJitter, kStartJitter);
  s[3] = rng.uniform(-kStartJitter, kStartJitter);
  return s;
}

StateVec CartpoleSwingupEnv::sample_goal(Rng& rng) const {
  double half = std::acos(kGoalCos);
  StateVec s(4);
  s[0] = rng.uniform(-kRailHalfLength, kRailHalfLength);
  s[1] = rng.uniform(-half, half);
  s[2] = rng.uniform(-kMaxLinVel, kMaxLinVel);
  s[3] = rng.uniform(-kMaxAngVel, kMaxAngVel);
  if (!in_goal(s)) s[1] = 0.0;  // boundary draw
  return s;
}

bool CartpoleSwingupEnv::in_goal(const StateVec& s) const {
  return std::cos(s[1]) > kGoalCos;
}

std::vector<std::pair<std::string, double>> CartpoleSwingupEnv::constants() const {
  return {{"gravity", kGravity},
          {"mass_cart", kMassCart},
          {"mass_pole", kMassPole},
          {"pole_half_length", kPoleHalfLength},
          {"force_mag", kForceMag},
          {"dt", kDt},
          {"rail_half_length", kRailHalfLength},
          {"max_lin_vel", kMaxLinVel},
          {"max_ang_vel", kMaxAngVel},
          {"goal_cos", kGoalCos},
          {"start_jitter", kStartJitter}};
}

// ---------------------------------------------------------------------------
// Registry

std::vector<std::string> env_names() {
  return {"mountaincar", "pendulum", "acrobot", "cartpole_swingup"};
}

std::unique_ptr<Env> make_env(const std::string& name) {
  if (name == "mountaincar") return std::make_unique<MountainCarEnv>();
  if (name == "pendulum") return std::make_unique<PendulumEnv>();
  if (name == "acrobot") return std::make_unique<AcrobotEnv>();
  if (name == "cartpole_swingup") return std::make_unique<CartpoleSwingupEnv>();
  throw std::invalid_argument("unknown environment: " + name);
}

std::string constants_report(const Env& env) {
  const EnvSpec& spec = env.spec();
  std::ostringstream out;
  out << "env = " << spec.name << "\n";
  out << "state_dim = " << spec.state_dim << "\n";
  out << "action_dim = " << spec.action_dim << "\n";
  out << "horizon = " << spec.horizon << "\n";
  out << "angular_dims =";
  for (int d : spec.angular_dims) out << " " << d;
  out << "\n";
  for (int i = 0; i < spec.state_dim; ++i) {
    out << "state_bounds[" << i << "] = [" << format_double(spec.state_bounds.lower[i])
        << ", " << format_double(spec.state_bounds.upper[i]) << "]\n";
  }
  for (int i = 0; i < spec.action_dim; ++i) {
    out << "action_bounds[" << i << "] = [" << format_double(spec.action_bounds.lower[i])
        << ", " << format_double(spec.action_bounds.upper[i]) << "]\n";
  }
  for (const auto& [key, value] : env.constants()) {
    out << key << " = " << format_double(value) << "\n";
  }
  return out.str();
}

std::string constants_hash(const Env& env) {
  return fnv1a_hex(constants_report(env));
}

}  // namespace p2d2
