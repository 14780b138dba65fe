#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "p2d2/rng.hpp"

namespace p2d2 {

using StateVec = Eigen::VectorXd;
using ActionVec = Eigen::VectorXd;

/// Axis-aligned box with lower[i] < upper[i].
struct BoundsBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Eigen::VectorXd& v, double tol = 0.0) const;
  Eigen::VectorXd clamp(const Eigen::VectorXd& v) const;
  void validate() const;

  static BoundsBox of(std::vector<double> lo, std::vector<double> hi);
};

struct StepResult {
  StateVec next_state;
  double reward = 0.0;
  bool in_goal = false;
  bool terminal = false;
};

struct EnvSpec {
  std::string name;
  int state_dim = 0;
  int action_dim = 0;
  BoundsBox state_bounds;
  BoundsBox action_bounds;
  int horizon = 0;
  std::vector<int> angular_dims;  // sorted state indices treated as angles

  bool is_angular(int i) const;
  void validate() const;
};

/// Environment protocol: an MDP with settable state.
///
/// step is a pure function of (state, action) -- there is no hidden simulator
/// state, so "set state then step" is the single call and re-executing a
/// stored action reproduces the stored successor bit for bit. Instances are
/// immutable after construction and safe to share across threads.
class Env {
 public:
  virtual ~Env() = default;

  const EnvSpec& spec() const { return spec_; }

  /// One control interval of the deterministic dynamics. Wraps angular
  /// dimensions of the input, clamps the action to the action bounds.
  /// Throws std::invalid_argument on non-finite input or dimension mismatch.
  StepResult step(const StateVec& state, const ActionVec& action) const;

  virtual StateVec sample_initial(Rng& rng) const = 0;

  /// Uniform draw from the goal region (for goal-biased tree growth).
  virtual StateVec sample_goal(Rng& rng) const = 0;

  virtual bool in_goal(const StateVec& s) const = 0;

  /// Whether entering the goal region ends the episode.
  virtual bool goal_terminal() const = 0;

  /// Physical constants in a fixed order, for the auditable dump and the
  /// integrity hash stored in persisted files.
  virtual std::vector<std::pair<std::string, double>> constants() const = 0;

 protected:
  explicit Env(EnvSpec spec);

  virtual StepResult dynamics(const StateVec& state,
                              const ActionVec& clamped_action) const = 0;

  EnvSpec spec_;
};

/// Wrap an angle into (-pi, pi].
double wrap_angle(double theta);

/// Copy of s with angular dimensions wrapped into (-pi, pi].
StateVec wrap_state(const EnvSpec& spec, StateVec s);

/// Uniform draw from the state bounds box.
StateVec sample_state(const EnvSpec& spec, Rng& rng);

/// Affine map of each dimension from [lower, upper] to [-1, 1]; angular
/// dimensions are wrapped first.
StateVec normalize(const EnvSpec& spec, const StateVec& s);

/// Inverse of normalize (up to angle wrapping).
StateVec denormalize(const EnvSpec& spec, const StateVec& s_norm);

/// Dimension of the metric embedding: angular dimensions contribute a
/// (cos, sin) pair, every other dimension one normalized coordinate.
int embedded_dim(const EnvSpec& spec);

/// Metric embedding of a state. Non-angular dimensions map to their
/// normalized coordinate; an angular dimension with bounds [lo, hi] maps to
/// (cos t, sin t) scaled by 2/(hi - lo) so the local scale matches the
/// normalized axes and the seam at +-pi disappears. Optional per-dimension
/// weights multiply squared distances.
Eigen::VectorXd embed_state(const EnvSpec& spec, const StateVec& s,
                            const Eigen::VectorXd* weights = nullptr);

/// Distance used for nearest-node selection: the Euclidean distance between
/// metric embeddings. Symmetric, nonnegative, zero iff the states are equal
/// after wrapping, and satisfies the triangle inequality exactly.
double state_distance(const EnvSpec& spec, const StateVec& a,
                      const StateVec& b,
                      const Eigen::VectorXd* weights = nullptr);

void require_finite(const Eigen::VectorXd& v, const char* what);

}  // namespace p2d2
