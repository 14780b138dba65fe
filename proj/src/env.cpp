#include "p2d2/env.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace p2d2 {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

bool BoundsBox::contains(const Eigen::VectorXd& v, double tol) const {
  if (v.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] < lower[i] - tol || v[i] > upper[i] + tol) return false;
  }
  return true;
}

Eigen::VectorXd BoundsBox::clamp(const Eigen::VectorXd& v) const {
  return v.cwiseMax(lower).cwiseMin(upper);
}

void BoundsBox::validate() const {
  if (lower.size() != upper.size()) {
    throw std::invalid_argument("BoundsBox: lower/upper size mismatch");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) {
      throw std::invalid_argument("BoundsBox: lower must be < upper");
    }
  }
}

BoundsBox BoundsBox::of(std::vector<double> lo, std::vector<double> hi) {
  BoundsBox b;
  b.lower = Eigen::Map<Eigen::VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size()));
  b.upper = Eigen::Map<Eigen::VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size()));
  b.validate();
  return b;
}

bool EnvSpec::is_angular(int i) const {
  for (int d : angular_dims) {
    if (d == i) return true;
  }
  return false;
}

void EnvSpec::validate() const {
  if (state_dim <= 0 || action_dim <= 0) {
    throw std::invalid_argument("EnvSpec: dims must be positive");
  }
  if (horizon <= 0) throw std::invalid_argument("EnvSpec: horizon must be positive");
  state_bounds.validate();
  action_bounds.validate();
  if (state_bounds.dim() != state_dim || action_bounds.dim() != action_dim) {
    throw std::invalid_argument("EnvSpec: bounds dimension mismatch");
  }
  for (int d : angular_dims) {
    if (d < 0 || d >= state_dim) {
      throw std::invalid_argument("EnvSpec: angular dim out of range");
    }
  }
}

Env::Env(EnvSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entries");
  }
}

StepResult Env::step(const StateVec& state, const ActionVec& action) const {
  if (state.size() != spec_.state_dim) {
    throw std::invalid_argument("step: state dimension mismatch");
  }
  if (action.size() != spec_.action_dim) {
    throw std::invalid_argument("step: action dimension mismatch");
  }
  require_finite(state, "step: state");
  require_finite(action, "step: action");

  StateVec s = wrap_state(spec_, state);
  ActionVec a = spec_.action_bounds.clamp(action);
  StepResult res = dynamics(s, a);
  res.next_state = wrap_state(spec_, std::move(res.next_state));
  res.in_goal = in_goal(res.next_state);
  res.terminal = res.in_goal && goal_terminal();
  return res;
}

double wrap_angle(double theta) {
  double t = std::fmod(theta + kPi, kTwoPi);
  if (t <= 0.0) t += kTwoPi;
  return t - kPi;
}

StateVec wrap_state(const EnvSpec& spec, StateVec s) {
  for (int d : spec.angular_dims) s[d] = wrap_angle(s[d]);
  return s;
}

StateVec sample_state(const EnvSpec& spec, Rng& rng) {
  StateVec s(spec.state_dim);
  for (int i = 0; i < spec.state_dim; ++i) {
    s[i] = rng.uniform(spec.state_bounds.lower[i], spec.state_bounds.upper[i]);
  }
  return s;
}

StateVec normalize(const EnvSpec& spec, const StateVec& s) {
  StateVec w = wrap_state(spec, s);
  StateVec out(spec.state_dim);
  for (int i = 0; i < spec.state_dim; ++i) {
    double lo = spec.state_bounds.lower[i];
    double hi = spec.state_bounds.upper[i];
    out[i] = 2.0 * (w[i] - lo) / (hi - lo) - 1.0;
  }
  return out;
}

StateVec denormalize(const EnvSpec& spec, const StateVec& s_norm) {
  StateVec out(spec.state_dim);
  for (int i = 0; i < spec.state_dim; ++i) {
    double lo = spec.state_bounds.lower[i];
    double hi = spec.state_bounds.upper[i];
    out[i] = lo + (s_norm[i] + 1.0) * (hi - lo) / 2.0;
  }
  return out;
}

int embedded_dim(const EnvSpec& spec) {
  return spec.state_dim + static_cast<int>(spec.angular_dims.size());
}

Eigen::VectorXd embed_state(const EnvSpec& spec, const StateVec& s,
                            const Eigen::VectorXd* weights) {
  Eigen::VectorXd e(embedded_dim(spec));
  int j = 0;
  for (int i = 0; i < spec.state_dim; ++i) {
    double w = weights != nullptr ? std::sqrt((*weights)[i]) : 1.0;
    double lo = spec.state_bounds.lower[i];
    double hi = spec.state_bounds.upper[i];
    if (spec.is_angular(i)) {
      double scale = w * 2.0 / (hi - lo);
      e[j++] = scale * std::cos(s[i]);
      e[j++] = scale * std::sin(s[i]);
    } else {
      e[j++] = w * (2.0 * (s[i] - lo) / (hi - lo) - 1.0);
    }
  }
  return e;
}

double state_distance(const EnvSpec& spec, const StateVec& a,
                      const StateVec& b, const Eigen::VectorXd* weights) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("state_distance: dimension mismatch");
  }
  return (embed_state(spec, a, weights) - embed_state(spec, b, weights))
      .norm();
}

}  // namespace p2d2
