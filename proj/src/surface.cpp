#include "p2d2/surface.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "p2d2/parallel.hpp"

namespace p2d2 {

LinearPolicy2D::LinearPolicy2D(EnvSpec spec, double theta0, double theta1)
    : spec_(std::move(spec)), theta0_(theta0), theta1_(theta1) {
  if (spec_.state_dim != 2 || spec_.action_dim != 1) {
    throw std::invalid_argument(
        "LinearPolicy2D: needs a 2-D state and a 1-D action");
  }
  if (!std::isfinite(theta0) || !std::isfinite(theta1)) {
    throw std::invalid_argument("LinearPolicy2D: non-finite parameter");
  }
}

ActionVec LinearPolicy2D::act(const StateVec& s) const {
  StateVec n = normalize(spec_, s);
  ActionVec a(1);
  a[0] = theta0_ * n[0] + theta1_ * n[1];
  return spec_.action_bounds.clamp(a);
}

std::string LinearPolicy2D::name() const {
  return "linear[" + format_double(theta0_) + "," + format_double(theta1_) +
         "]";
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linspace: n must be >= 1");
  std::vector<double> v;
  v.reserve(n);
  if (n == 1) {
    v.push_back(lo);
    return v;
  }
  for (int i = 0; i < n; ++i) {
    v.push_back(lo + (hi - lo) * i / (n - 1));
  }
  return v;
}

SurfaceGrid return_surface(const Env& env, const std::vector<double>& theta0s,
                           const std::vector<double>& theta1s,
                           int episodes_per_cell, Rng rng, int threads,
                           const Deadline& deadline) {
  if (theta0s.empty() || theta1s.empty()) {
    throw std::invalid_argument("return_surface: empty parameter grid");
  }
  if (episodes_per_cell < 1) {
    throw std::invalid_argument("return_surface: episodes_per_cell must be >= 1");
  }
  SurfaceGrid grid;
  grid.theta0s = theta0s;
  grid.theta1s = theta1s;
  grid.episodes_per_cell = episodes_per_cell;
  const int rows = static_cast<int>(theta0s.size());
  const int cols = static_cast<int>(theta1s.size());
  grid.mean_returns.setConstant(rows, cols,
                                std::numeric_limits<double>::quiet_NaN());
  parallel_for(rows * cols, threads, [&](int cell) {
    if (deadline.expired()) return;
    const int i = cell / cols;
    const int j = cell % cols;
    LinearPolicy2D policy(env.spec(), theta0s[i], theta1s[j]);
    EvalReport report =
        evaluate_policy(policy, env, episodes_per_cell,
                        rng.split(static_cast<std::uint64_t>(cell)));
    grid.mean_returns(i, j) = report.mean_undisc_return;
  });
  grid.partial = grid.mean_returns.hasNaN();
  return grid;
}

std::string surface_csv(const SurfaceGrid& grid) {
  std::ostringstream out;
  out << "theta0,theta1,mean_return\n";
  for (size_t i = 0; i < grid.theta0s.size(); ++i) {
    for (size_t j = 0; j < grid.theta1s.size(); ++j) {
      out << format_double(grid.theta0s[i]) << ','
          << format_double(grid.theta1s[j]) << ','
          << format_double(grid.mean_returns(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(j)))
          << '\n';
    }
  }
  return out.str();
}

}  // namespace p2d2
