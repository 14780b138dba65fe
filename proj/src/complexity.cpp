#include "p2d2/complexity.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "p2d2/parallel.hpp"

namespace p2d2 {

double tail_sum_closed_form(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("tail_sum_closed_form: a and b must be positive");
  }
  const double s = std::sinh(b / 2.0);
  return a / (4.0 * s * s);
}

double tail_sum_series(double a, double b, long terms) {
  if (terms < 1) throw std::invalid_argument("tail_sum_series: terms must be >= 1");
  // Compensated summation: at small b the sum has ~1/b terms and reaches
  // a/b^2, so naive accumulation would lose more than the comparison
  // tolerance of the closed-form identity check.
  double sum = 0.0, carry = 0.0;
  for (long k = 1; k <= terms; ++k) {
    const double term = k * a * std::exp(-b * k) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum;
}

long series_terms_for(double b) {
  if (!(b > 0.0)) throw std::invalid_argument("series_terms_for: b must be positive");
  return static_cast<long>(std::ceil(44.0 / b));
}

ComplexityReport complexity_check(const Env& env,
                                  const PlannerConfig& config_template,
                                  const TailFit& fit, int seeds,
                                  int budget_cap, Rng rng, int threads,
                                  const Deadline& deadline) {
  if (!(fit.a_hat > 0.0) || !(fit.b_hat > 0.0)) {
    throw std::invalid_argument(
        "complexity_check: missing tail fit (constants must be positive)");
  }
  if (seeds < 1) throw std::invalid_argument("complexity_check: seeds must be >= 1");
  if (budget_cap < 1) {
    throw std::invalid_argument("complexity_check: budget_cap must be >= 1");
  }
  PlannerConfig config = config_template;
  config.budget_k = budget_cap;
  config.stop_on_first_goal = true;
  config.validate();

  constexpr long kNotRun = -2;
  std::vector<long> hit(seeds, kNotRun);
  parallel_for(seeds, threads, [&](int i) {
    if (deadline.expired()) return;
    PlannerConfig cfg = config;
    cfg.seed = static_cast<std::uint64_t>(i);
    Tree tree = grow_tree(env, cfg, rng.split(static_cast<std::uint64_t>(i)));
    hit[i] = tree.stats.first_success_iter;
  });

  ComplexityReport report;
  std::vector<double> samples;
  samples.reserve(seeds);
  for (long h : hit) {
    if (h == kNotRun) continue;
    if (h < 0) {
      ++report.censored;
      samples.push_back(budget_cap);
    } else {
      samples.push_back(static_cast<double>(h));
    }
  }
  if (samples.empty()) {
    throw std::runtime_error(
        "complexity_check: the time cap expired before any seed finished");
  }
  report.seeds = static_cast<int>(samples.size());
  report.partial = report.seeds < seeds;
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= samples.size();
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var = samples.size() > 1 ? var / (samples.size() - 1) : 0.0;
  const double half = 1.959963984540054 * std::sqrt(var / samples.size());
  report.mean_hitting_k = mean;
  report.mean_ci = {mean - half, mean + half};
  report.hitting_bound = tail_sum_closed_form(fit.a_hat, fit.b_hat);
  report.bound_satisfied = report.mean_hitting_k <= report.hitting_bound;
  report.series_abs_error =
      std::abs(tail_sum_series(fit.a_hat, fit.b_hat,
                               series_terms_for(fit.b_hat)) -
               report.hitting_bound);
  return report;
}

std::string complexity_csv(const ComplexityReport& r) {
  std::ostringstream out;
  out << "mean_hitting_k,mean_ci_lower,mean_ci_upper,hitting_bound,"
         "bound_satisfied,series_abs_error,seeds,censored,partial\n"
      << format_double(r.mean_hitting_k) << ','
      << format_double(r.mean_ci.lower) << ','
      << format_double(r.mean_ci.upper) << ','
      << format_double(r.hitting_bound) << ','
      << (r.bound_satisfied ? "true" : "false") << ','
      << format_double(r.series_abs_error) << ',' << r.seeds << ','
      << r.censored << ',' << (r.partial ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace p2d2
