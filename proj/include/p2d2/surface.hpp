#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "p2d2/env.hpp"
#include "p2d2/policy.hpp"
#include "p2d2/util.hpp"

namespace p2d2 {

/// Two-parameter linear policy for 2-D single-actuator environments:
/// action = clamp(theta0 * n0 + theta1 * n1) over the bounds-normalized
/// state (n0, n1). Sweeping (theta0, theta1) maps the return landscape the
/// demonstration-discovery pipeline is motivated by: most of the plane is a
/// flat plateau at the minimum return, where gradient information vanishes.
class LinearPolicy2D : public Policy {
 public:
  LinearPolicy2D(EnvSpec spec, double theta0, double theta1);
  ActionVec act(const StateVec& s) const override;
  std::string name() const override;

 private:
  EnvSpec spec_;
  double theta0_, theta1_;
};

struct SurfaceGrid {
  std::vector<double> theta0s;
  std::vector<double> theta1s;
  int episodes_per_cell = 0;
  /// theta0s.size() x theta1s.size(); NaN marks cells the deadline skipped.
  Eigen::MatrixXd mean_returns;
  bool partial = false;
};

/// n evenly spaced values from lo to hi inclusive (n >= 2, or n == 1 -> lo).
std::vector<double> linspace(double lo, double hi, int n);

/// Mean undiscounted return of the linear policy per grid cell, over
/// episodes_per_cell episodes from sampled starts. Cell (i, j) uses
/// rng.split(i * theta1s.size() + j), so results are independent of both
/// evaluation order and thread count.
SurfaceGrid return_surface(const Env& env, const std::vector<double>& theta0s,
                           const std::vector<double>& theta1s,
                           int episodes_per_cell, Rng rng, int threads = 0,
                           const Deadline& deadline = Deadline());

/// CSV, one row per cell in row-major order: theta0,theta1,mean_return
std::string surface_csv(const SurfaceGrid& grid);

}  // namespace p2d2
