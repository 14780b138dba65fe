#include "p2d2/tail_fit.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "p2d2/parallel.hpp"

namespace p2d2 {

namespace {
constexpr double kZ95 = 1.959963984540054;  // 97.5% normal quantile
}  // namespace

CiBound wilson_interval(int count, int trials) {
  if (trials < 1) throw std::invalid_argument("wilson_interval: trials must be >= 1");
  if (count < 0 || count > trials) {
    throw std::invalid_argument("wilson_interval: count out of range");
  }
  const double n = trials;
  const double p = count / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double half =
      kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  CiBound ci;
  // At the boundary counts the exact endpoints are p itself; computing them
  // through the quadratic form leaves ~1e-18 of drift, so pin them.
  ci.lower = count == 0 ? 0.0 : std::max(0.0, (center - half) / denom);
  ci.upper = count == trials ? 1.0 : std::min(1.0, (center + half) / denom);
  return ci;
}

double TailFit::predicted(int k) const {
  return std::min(1.0, a_hat * std::exp(-b_hat * k));
}

TailFit fit_failure_tail(std::vector<FailurePoint> points) {
  if (points.empty()) {
    throw std::invalid_argument("fit_failure_tail: no points");
  }
  for (const FailurePoint& pt : points) {
    if (pt.trials < 1) {
      throw std::invalid_argument("fit_failure_tail: point with no trials");
    }
  }
  bool any_success = false, any_failure = false;
  for (const FailurePoint& pt : points) {
    if (pt.failures < pt.trials) any_success = true;
    if (pt.failures > 0) any_failure = true;
  }
  if (!any_failure) {
    throw std::runtime_error(
        "tail fit error: every run succeeded; shift the budget grid toward "
        "smaller budgets to expose the failure transition");
  }
  if (!any_success) {
    throw std::runtime_error(
        "tail fit error: every run failed; shift the budget grid toward "
        "larger budgets to expose the failure transition");
  }
  std::vector<const FailurePoint*> interior;
  for (const FailurePoint& pt : points) {
    if (pt.failures > 0 && pt.failures < pt.trials) interior.push_back(&pt);
  }
  if (interior.size() < 2) {
    throw std::runtime_error(
        "tail fit error: fewer than two grid points have failure "
        "probability strictly between 0 and 1; refine the budget grid near "
        "the transition");
  }
  double kbar = 0.0, ybar = 0.0;
  for (const FailurePoint* pt : interior) {
    kbar += pt->budget_k;
    ybar += std::log(pt->fail_prob);
  }
  kbar /= interior.size();
  ybar /= interior.size();
  double sxx = 0.0, sxy = 0.0;
  for (const FailurePoint* pt : interior) {
    const double dk = pt->budget_k - kbar;
    sxx += dk * dk;
    sxy += dk * (std::log(pt->fail_prob) - ybar);
  }
  if (sxx == 0.0) {
    throw std::runtime_error(
        "tail fit error: interior points share one budget; use a grid of "
        "distinct budgets");
  }
  const double slope = sxy / sxx;
  TailFit fit;
  fit.b_hat = -slope;
  if (!(fit.b_hat > 0.0)) {
    throw std::runtime_error(
        "tail fit error: failure probability does not decay over the "
        "interior points; widen the budget range");
  }
  const double intercept = ybar - slope * kbar;
  double ss_res = 0.0, ss_tot = 0.0;
  for (const FailurePoint* pt : interior) {
    const double y = std::log(pt->fail_prob);
    ss_res += std::pow(y - (intercept + slope * pt->budget_k), 2);
    ss_tot += std::pow(y - ybar, 2);
  }
  fit.fit_quality = 1.0 - ss_res / ss_tot;
  fit.interior_points = static_cast<int>(interior.size());
  fit.a_hat = 0.0;
  for (const FailurePoint& pt : points) {
    fit.a_hat = std::max(fit.a_hat,
                         pt.ci.upper * std::exp(fit.b_hat * pt.budget_k));
  }
  fit.points = std::move(points);
  return fit;
}

TailFit failure_curve(const Env& env, const PlannerConfig& config_template,
                      const std::vector<int>& k_grid, int seeds_per_point,
                      Rng rng, int threads, const Deadline& deadline) {
  if (k_grid.empty()) {
    throw std::invalid_argument("failure_curve: empty budget grid");
  }
  for (size_t i = 0; i < k_grid.size(); ++i) {
    if (k_grid[i] < 1 || (i > 0 && k_grid[i] <= k_grid[i - 1])) {
      throw std::invalid_argument(
          "failure_curve: budget grid must be strictly increasing and "
          "positive");
    }
  }
  if (seeds_per_point < 30) {
    throw std::invalid_argument("failure_curve: need at least 30 seeds per point");
  }
  PlannerConfig config = config_template;
  config.budget_k = k_grid.back();
  config.stop_on_first_goal = true;
  config.validate();

  constexpr long kNotRun = -2;
  std::vector<long> hit(seeds_per_point, kNotRun);
  parallel_for(seeds_per_point, threads, [&](int i) {
    if (deadline.expired()) return;
    PlannerConfig cfg = config;
    cfg.seed = static_cast<std::uint64_t>(i);
    Tree tree = grow_tree(env, cfg, rng.split(static_cast<std::uint64_t>(i)));
    hit[i] = tree.stats.first_success_iter;
  });

  int done = 0;
  for (long h : hit) done += h != kNotRun;
  if (done == 0) {
    throw std::runtime_error(
        "failure_curve: the time cap expired before any seed finished");
  }
  std::vector<FailurePoint> points;
  points.reserve(k_grid.size());
  for (int k : k_grid) {
    FailurePoint pt;
    pt.budget_k = k;
    pt.trials = done;
    for (long h : hit) {
      if (h == kNotRun) continue;
      if (h < 0 || h > k) ++pt.failures;
    }
    pt.fail_prob = static_cast<double>(pt.failures) / done;
    pt.ci = wilson_interval(pt.failures, done);
    points.push_back(pt);
  }
  TailFit fit = fit_failure_tail(std::move(points));
  fit.partial = done < seeds_per_point;
  return fit;
}

std::string tail_fit_csv(const TailFit& fit) {
  std::ostringstream out;
  out << "budget,trials,failures,fail_prob,ci_lower,ci_upper,envelope\n";
  for (const FailurePoint& pt : fit.points) {
    out << pt.budget_k << ',' << pt.trials << ',' << pt.failures << ','
        << format_double(pt.fail_prob) << ',' << format_double(pt.ci.lower)
        << ',' << format_double(pt.ci.upper) << ','
        << format_double(fit.predicted(pt.budget_k)) << '\n';
  }
  return out.str();
}

std::string tail_fit_summary_csv(const TailFit& fit) {
  std::ostringstream out;
  out << "a_hat,b_hat,fit_quality,interior_points,partial\n"
      << format_double(fit.a_hat) << ',' << format_double(fit.b_hat) << ','
      << format_double(fit.fit_quality) << ',' << fit.interior_points << ','
      << (fit.partial ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace p2d2
