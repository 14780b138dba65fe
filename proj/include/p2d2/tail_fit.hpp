#pragma once

#include <string>
#include <vector>

#include "p2d2/env.hpp"
#include "p2d2/planner.hpp"
#include "p2d2/util.hpp"

namespace p2d2 {

struct CiBound {
  double lower = 0.0;
  double upper = 1.0;
};

/// 95% Wilson score interval for a binomial proportion with `count` events
/// in `trials` draws. The upper bound is exactly 1 when every draw was an
/// event and the lower bound exactly 0 (up to rounding) when none was.
CiBound wilson_interval(int count, int trials);

struct FailurePoint {
  int budget_k = 0;
  int trials = 0;
  int failures = 0;
  double fail_prob = 0.0;
  CiBound ci;
};

/// Exponential tail fitted over a failure curve: the curve
/// min(1, a_hat * exp(-b_hat * k)) upper-bounds every point's CI upper.
/// fit_quality is the R^2 of the log-linear regression over the interior
/// points (those with 0 < fail_prob < 1); a_hat is then inflated to the
/// envelope, so the regression sets only the decay rate b_hat.
struct TailFit {
  double a_hat = 0.0;
  double b_hat = 0.0;
  double fit_quality = 0.0;
  int interior_points = 0;
  bool partial = false;  // a deadline cut the seed sweep short
  std::vector<FailurePoint> points;

  /// min(1, a_hat * exp(-b_hat * k))
  double predicted(int k) const;
};

/// Least-squares fit of log fail_prob = log a - b k over the interior
/// points, followed by envelope inflation of a over all points. Throws
/// std::runtime_error with grid-shifting guidance when every run failed,
/// every run succeeded, fewer than two points are interior, or the interior
/// trend does not decay.
TailFit fit_failure_tail(std::vector<FailurePoint> points);

/// Empirical failure probabilities for every budget in k_grid, over
/// seeds_per_point independent trees per point. One stop-on-first-goal tree
/// per seed is grown to the largest budget; iterations 1..k of growth do
/// not depend on the budget, so success under each smaller budget is read
/// off the same tree's first-success iteration, exactly as if every budget
/// had its own sweep reusing the same seeds. Seed i uses rng.split(i); the
/// config template's budget_k / stop_on_first_goal / seed fields are
/// overridden. Requires a strictly increasing positive grid and
/// seeds_per_point >= 30. If the deadline expires mid-sweep the completed
/// seeds are kept and the result is flagged partial.
TailFit failure_curve(const Env& env, const PlannerConfig& config_template,
                      const std::vector<int>& k_grid, int seeds_per_point,
                      Rng rng, int threads = 0,
                      const Deadline& deadline = Deadline());

/// CSV, one row per grid point:
/// budget,trials,failures,fail_prob,ci_lower,ci_upper,envelope
std::string tail_fit_csv(const TailFit& fit);

/// Single-row CSV: a_hat,b_hat,fit_quality,interior_points,partial
std::string tail_fit_summary_csv(const TailFit& fit);

}  // namespace p2d2
