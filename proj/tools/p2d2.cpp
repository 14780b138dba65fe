// Command-line front end: demonstration discovery, imitation, evaluation,
// expert baselines, failure-curve and complexity checks, return surfaces,
// and the end-to-end pipeline. Every command takes --seed (full run
// determinism: file outputs are byte-identical across reruns and thread
// counts), --out-dir (default from P2D2_OUT_DIR), and --time-cap seconds
// (0 = unlimited; capped runs that finish partially exit with code 3).
//
// Exit codes: 0 success, 1 usage error, 2 runtime error, 3 partial or
// shortfall results.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "p2d2/complexity.hpp"
#include "p2d2/demo_store.hpp"
#include "p2d2/envs.hpp"
#include "p2d2/experts.hpp"
#include "p2d2/pipeline.hpp"
#include "p2d2/surface.hpp"
#include "p2d2/svg.hpp"
#include "p2d2/tail_fit.hpp"
#include "p2d2/util.hpp"

namespace {

using namespace p2d2;

std::string default_out_dir() {
  const char* env = std::getenv("P2D2_OUT_DIR");
  return env && *env ? env : ".";
}

std::string out_path(const std::string& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / file).string();
}

void emit(const std::string& path, const std::string& text) {
  write_text_file(path, text);
  std::cout << "wrote " << path << "\n";
}

Deadline deadline_from(double cap_seconds) {
  return cap_seconds > 0.0 ? Deadline(cap_seconds) : Deadline();
}

/// Planner flags shared by every tree-growing command; names mirror the
/// PlannerConfig fields.
struct PlannerOpts {
  PlannerConfig config;
  double min_return = 0.0;
  CLI::Option* min_return_opt = nullptr;

  void add_to(CLI::App* cmd, int default_budget) {
    config.budget_k = default_budget;
    cmd->add_option("--k", config.budget_k, "Iteration budget per tree")
        ->capture_default_str();
    cmd->add_option("--p-g", config.goal_bias_pg,
                    "Goal-bias probability in [0, 1]")
        ->capture_default_str();
    cmd->add_option("--gamma", config.gamma, "Discount factor in [0, 1)")
        ->capture_default_str();
    cmd->add_option("--return-weight", config.return_weight,
                    "Weight of the return coordinate in the search index "
                    "(0 disables return augmentation)")
        ->capture_default_str();
    min_return_opt = cmd->add_option(
        "--min-return", min_return,
        "Discounted-return threshold a goal node must also meet");
    cmd->add_option("--max-depth", config.max_depth,
                    "Depth cap per branch (0: environment horizon)")
        ->capture_default_str();
  }

  PlannerConfig resolved(std::uint64_t seed) {
    config.seed = seed;
    if (min_return_opt && min_return_opt->count()) {
      config.min_return_rhat = min_return;
    }
    return config;
  }
};

struct RffOpts {
  RffConfig config;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--features", config.num_features,
                    "Number of random cosine features")
        ->capture_default_str();
    cmd->add_option("--lengthscale", config.lengthscale,
                    "Kernel lengthscale in normalized state space")
        ->capture_default_str();
    cmd->add_option("--alpha", config.prior_precision,
                    "Weight prior precision")
        ->capture_default_str();
    cmd->add_option("--beta", config.noise_precision,
                    "Observation noise precision")
        ->capture_default_str();
  }
};

std::string flag_joined(const std::string& name, const std::vector<int>& v) {
  std::string out = name;
  for (size_t i = 0; i < v.size(); ++i) {
    out += (i == 0 ? " " : ",") + std::to_string(v[i]);
  }
  return out;
}

/// Deterministic provenance line for SVG output: the canonical replay
/// command, never wall-clock data.
std::string provenance(const std::string& text) { return "p2d2 " + text; }

double mean_traj_return(const DemoSet& set) {
  if (set.trajectories.empty()) return 0.0;
  double sum = 0.0;
  for (const Trajectory& t : set.trajectories) sum += t.undisc_return;
  return sum / static_cast<double>(set.trajectories.size());
}

double mean_traj_length(const DemoSet& set) {
  if (set.trajectories.empty()) return 0.0;
  double sum = 0.0;
  for (const Trajectory& t : set.trajectories) sum += t.length();
  return sum / static_cast<double>(set.trajectories.size());
}

std::string collect_summary_csv(const DemoSet& set, int requested) {
  std::string out =
      "env,requested,collected,shortfall,attempts,total_env_steps,"
      "mean_undisc_return,mean_length\n";
  out += set.env_name + ',' + std::to_string(requested) + ',' +
         std::to_string(set.trajectories.size()) + ',' +
         (set.shortfall ? "1" : "0") + ',' + std::to_string(set.attempts) +
         ',' + std::to_string(set.total_env_steps) + ',' +
         format_double(mean_traj_return(set)) + ',' +
         format_double(mean_traj_length(set)) + '\n';
  return out;
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

// ---------------------------------------------------------------------------
// plan: grow trees until N demonstrations are extracted.

struct PlanCmd {
  std::string env_name;
  PlannerOpts planner;
  int num_demos = 10;
  int attempt_cap = 50;
  std::uint64_t seed = 0;
  double time_cap = 0.0;
  std::string out_dir = default_out_dir();
  std::string base;
  bool dump_constants = false;

  int run() {
    auto env = make_env(env_name);
    if (dump_constants) {
      std::cout << constants_report(*env);
      return 0;
    }
    if (base.empty()) base = "plan_" + env_name;
    Timer timer;
    DemoSet set = p2d2_collect(*env, planner.resolved(seed), num_demos,
                               Rng(seed), attempt_cap,
                               deadline_from(time_cap));
    save_demos(set, out_path(out_dir, base + ".demos"));
    std::cout << "wrote " << out_path(out_dir, base + ".demos") << "\n";
    emit(out_path(out_dir, base + "_steps.csv"), demos_csv(set));
    emit(out_path(out_dir, base + "_summary.csv"),
         collect_summary_csv(set, num_demos));
    std::cout << "collected " << set.trajectories.size() << "/" << num_demos
              << " demonstrations in " << set.attempts << " attempts, "
              << set.total_env_steps << " env steps, " << timer.seconds()
              << "s\n";
    if (set.shortfall) {
      std::cerr << "partial: collection fell short of " << num_demos
                << " demonstrations\n";
      return 3;
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------
// imitate: fit the random-feature regression policy on a demo file.

struct ImitateCmd {
  std::string demos_path;
  RffOpts rff;
  std::uint64_t seed = 0;
  std::string out_dir = default_out_dir();
  std::string out_file;

  int run() {
    DemoSet set = load_demos(demos_path);
    auto env = make_env(set.env_name);
    RffPolicy policy = fit_policy(*env, set, rff.config, Rng(seed));
    if (out_file.empty()) out_file = set.env_name + ".policy";
    save_policy(policy, out_path(out_dir, out_file));
    std::cout << "wrote " << out_path(out_dir, out_file) << " ("
              << rff.config.num_features << " features, "
              << set.trajectories.size() << " demos)\n";
    return 0;
  }
};

// ---------------------------------------------------------------------------
// eval: roll out a saved policy or an expert and report per-episode stats.

struct EvalCmd {
  std::string policy_path;
  std::string expert_env;
  int episodes = 100;
  double gamma = 0.99;
  std::uint64_t seed = 0;
  std::string out_dir = default_out_dir();
  std::string base;

  int run() {
    std::unique_ptr<Env> env;
    std::unique_ptr<Policy> owned;
    const Policy* policy = nullptr;
    RffPolicy loaded;
    if (!policy_path.empty()) {
      loaded = load_policy(policy_path);
      env = make_env(loaded.spec().name);
      policy = &loaded;
      if (base.empty()) base = "eval_rff_" + loaded.spec().name;
    } else {
      env = make_env(expert_env);
      owned = make_expert(*env);
      policy = owned.get();
      if (base.empty()) base = "eval_expert_" + expert_env;
    }
    EvalReport report =
        evaluate_policy(*policy, *env, episodes, Rng(seed), gamma);
    emit(out_path(out_dir, base + "_episodes.csv"),
         eval_episodes_csv(report));
    emit(out_path(out_dir, base + "_summary.csv"),
         eval_summary_csv(report, policy->name(), env->spec().name));
    std::cout << policy->name() << ": success " << report.success_rate
              << ", mean return " << report.mean_undisc_return << " over "
              << episodes << " episodes\n";
    return 0;
  }
};

// ---------------------------------------------------------------------------
// expert: evaluate the hand-derived solver; optionally save its rollouts as
// a demonstration set for side-by-side comparison with discovered demos.

struct ExpertCmd {
  std::string env_name;
  int episodes = 100;
  int save_demos_n = 0;
  double gamma = 0.99;
  std::uint64_t seed = 0;
  double time_cap = 0.0;
  std::string out_dir = default_out_dir();
  std::string base;
  bool dump_constants = false;

  int run() {
    auto env = make_env(env_name);
    if (dump_constants) {
      std::cout << constants_report(*env);
      return 0;
    }
    auto expert = make_expert(*env);
    if (base.empty()) base = "expert_" + env_name;
    EvalReport report =
        evaluate_policy(*expert, *env, episodes, Rng(seed), gamma);
    emit(out_path(out_dir, base + "_episodes.csv"),
         eval_episodes_csv(report));
    emit(out_path(out_dir, base + "_summary.csv"),
         eval_summary_csv(report, expert->name(), env_name));
    std::cout << expert->name() << ": success " << report.success_rate
              << ", mean return " << report.mean_undisc_return << " over "
              << episodes << " episodes\n";

    int code = 0;
    if (save_demos_n > 0) {
      Deadline deadline = deadline_from(time_cap);
      DemoSet set;
      set.env_name = env_name;
      set.env_constants_hash = constants_hash(*env);
      set.config.gamma = gamma;
      set.config.seed = seed;
      set.created_with_seed = seed;
      Rng rng(seed);
      const int attempt_cap = 5 * save_demos_n;
      while (static_cast<int>(set.trajectories.size()) < save_demos_n &&
             set.attempts < attempt_cap) {
        if (deadline.expired()) {
          set.shortfall = true;
          break;
        }
        Rng attempt_rng = rng.split(static_cast<std::uint64_t>(set.attempts));
        ++set.attempts;
        StateVec s0 = env->sample_initial(attempt_rng);
        Trajectory traj = rollout_policy(*expert, *env, s0, gamma, true);
        set.total_env_steps += traj.length();
        if (traj.success) set.trajectories.push_back(std::move(traj));
      }
      if (static_cast<int>(set.trajectories.size()) < save_demos_n) {
        set.shortfall = true;
      }
      save_demos(set, out_path(out_dir, base + ".demos"));
      std::cout << "wrote " << out_path(out_dir, base + ".demos") << " ("
                << set.trajectories.size() << "/" << save_demos_n
                << " rollouts)\n";
      if (set.shortfall) {
        std::cerr << "partial: expert rollouts fell short of "
                  << save_demos_n << "\n";
        code = 3;
      }
    }
    return code;
  }
};

// ---------------------------------------------------------------------------
// failure-curve: failure probability versus budget, with the fitted
// exponential upper envelope.

struct CurveCmd {
  std::string env_name;
  PlannerOpts planner;
  std::vector<int> grid{500, 1000, 2000, 4000, 8000};
  int seeds_per_point = 50;
  std::uint64_t seed = 0;
  int threads = 0;
  double time_cap = 0.0;
  std::string out_dir = default_out_dir();
  std::string base;
  bool svg = false;
  bool dump_constants = false;

  int run() {
    auto env = make_env(env_name);
    if (dump_constants) {
      std::cout << constants_report(*env);
      return 0;
    }
    if (base.empty()) base = "curve_" + env_name;
    Timer timer;
    TailFit fit =
        failure_curve(*env, planner.resolved(seed), grid, seeds_per_point,
                      Rng(seed), threads, deadline_from(time_cap));
    emit(out_path(out_dir, base + ".csv"), tail_fit_csv(fit));
    emit(out_path(out_dir, base + "_fit.csv"), tail_fit_summary_csv(fit));
    if (svg) {
      std::vector<double> xs, ys, lo, hi, envl;
      for (const FailurePoint& pt : fit.points) {
        xs.push_back(pt.budget_k);
        ys.push_back(pt.fail_prob);
        lo.push_back(pt.ci.lower);
        hi.push_back(pt.ci.upper);
        envl.push_back(fit.predicted(pt.budget_k));
      }
      emit(out_path(out_dir, base + ".svg"),
           svg_line_plot(
               "failure probability vs budget (" + env_name + ")",
               "budget k", "failure probability", xs, ys, lo, hi, envl,
               provenance("failure-curve --env " + env_name + " " +
                          flag_joined("--grid", grid) + " --seeds " +
                          std::to_string(seeds_per_point) + " --seed " +
                          std::to_string(seed))));
    }
    std::cout << "fit: a_hat " << fit.a_hat << ", b_hat " << fit.b_hat
              << ", R^2 " << fit.fit_quality << " over "
              << fit.interior_points << " interior points, "
              << timer.seconds() << "s\n";
    if (fit.partial) {
      std::cerr << "partial: time cap expired before every seed finished\n";
      return 3;
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------
// complexity-check: fitted-envelope hitting-time bound versus measured
// mean hitting time.

struct ComplexityCmd {
  std::string env_name;
  PlannerOpts planner;
  std::vector<int> grid{3000, 4000, 5000, 6000, 8000};
  int seeds_per_point = 50;
  int hit_seeds = 100;
  int budget_cap = 20000;
  std::uint64_t seed = 0;
  int threads = 0;
  double time_cap = 0.0;
  std::string out_dir = default_out_dir();
  std::string base;
  bool dump_constants = false;

  int run() {
    auto env = make_env(env_name);
    if (dump_constants) {
      std::cout << constants_report(*env);
      return 0;
    }
    if (base.empty()) base = "complexity_" + env_name;
    Timer timer;
    Deadline deadline = deadline_from(time_cap);
    PlannerConfig config = planner.resolved(seed);
    TailFit fit = failure_curve(*env, config, grid, seeds_per_point,
                                Rng(seed), threads, deadline);
    emit(out_path(out_dir, base + "_curve.csv"), tail_fit_csv(fit));
    emit(out_path(out_dir, base + "_fit.csv"), tail_fit_summary_csv(fit));
    ComplexityReport report =
        complexity_check(*env, config, fit, hit_seeds, budget_cap,
                         Rng(seed).split(1), threads, deadline);
    emit(out_path(out_dir, base + ".csv"), complexity_csv(report));
    std::cout << "mean hitting " << report.mean_hitting_k << " (95% CI ["
              << report.mean_ci.lower << ", " << report.mean_ci.upper
              << "]) vs bound " << report.hitting_bound << ": "
              << (report.bound_satisfied ? "satisfied" : "VIOLATED") << ", "
              << report.censored << "/" << report.seeds << " censored, "
              << timer.seconds() << "s\n";
    std::cout << "note: the bound uses envelope-fitted constants, so this "
                 "is a consistency check, not a proof\n";
    if (fit.partial || report.partial) {
      std::cerr << "partial: time cap expired before every seed finished\n";
      return 3;
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------
// surface: mean return of the 2-parameter linear policy over a grid.

struct SurfaceCmd {
  std::string env_name = "mountaincar";
  std::vector<double> theta0{-5.0, 50.0, 20.0};
  std::vector<double> theta1{-5.0, 50.0, 20.0};
  int episodes_per_cell = 3;
  std::uint64_t seed = 0;
  int threads = 0;
  double time_cap = 0.0;
  std::string out_dir = default_out_dir();
  std::string base;
  bool svg = false;
  bool dump_constants = false;

  static std::vector<double> axis(const std::vector<double>& spec_triple,
                                  const char* flag) {
    const int n = static_cast<int>(spec_triple[2]);
    if (n < 1 || spec_triple[2] != n) {
      throw std::invalid_argument(std::string(flag) +
                                  ": count must be a positive integer");
    }
    return linspace(spec_triple[0], spec_triple[1], n);
  }

  int run() {
    auto env = make_env(env_name);
    if (dump_constants) {
      std::cout << constants_report(*env);
      return 0;
    }
    if (base.empty()) base = "surface_" + env_name;
    Timer timer;
    std::vector<double> theta0s = axis(theta0, "--theta0");
    std::vector<double> theta1s = axis(theta1, "--theta1");
    SurfaceGrid grid =
        return_surface(*env, theta0s, theta1s, episodes_per_cell, Rng(seed),
                       threads, deadline_from(time_cap));
    emit(out_path(out_dir, base + ".csv"), surface_csv(grid));
    if (svg) {
      emit(out_path(out_dir, base + ".svg"),
           svg_heatmap("mean return (" + env_name + ")", "theta1", "theta0",
                       theta1s, theta0s, grid.mean_returns,
                       provenance("surface --env " + env_name + " --seed " +
                                  std::to_string(seed) + " --episodes " +
                                  std::to_string(episodes_per_cell))));
    }
    double best = grid.mean_returns(0, 0);
    for (Eigen::Index i = 0; i < grid.mean_returns.rows(); ++i) {
      for (Eigen::Index j = 0; j < grid.mean_returns.cols(); ++j) {
        const double v = grid.mean_returns(i, j);
        if (std::isfinite(v) && v > best) best = v;
      }
    }
    std::cout << theta0s.size() << "x" << theta1s.size()
              << " grid, best cell return " << best << ", "
              << timer.seconds() << "s\n";
    if (grid.partial) {
      std::cerr << "partial: time cap expired before every cell finished\n";
      return 3;
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------
// pipeline: collect -> imitate -> evaluate in one deterministic run.

struct PipelineCmd {
  std::string env_name;
  PlannerOpts planner;
  RffOpts rff;
  int num_demos = 10;
  int eval_episodes = 100;
  int attempt_cap = 50;
  std::uint64_t seed = 0;
  double time_cap = 0.0;
  std::string out_dir = default_out_dir();
  std::string base;
  bool dump_constants = false;

  int run() {
    auto env = make_env(env_name);
    if (dump_constants) {
      std::cout << constants_report(*env);
      return 0;
    }
    if (base.empty()) base = "pipeline_" + env_name;
    Timer timer;
    PipelineConfig config;
    config.planner = planner.resolved(seed);
    config.rff = rff.config;
    config.num_demos = num_demos;
    config.eval_episodes = eval_episodes;
    config.attempt_cap_per_demo = attempt_cap;
    PipelineResult result =
        end_to_end(*env, config, Rng(seed), deadline_from(time_cap));
    save_demos(result.demos, out_path(out_dir, base + ".demos"));
    std::cout << "wrote " << out_path(out_dir, base + ".demos") << "\n";
    save_policy(result.policy, out_path(out_dir, base + ".policy"));
    std::cout << "wrote " << out_path(out_dir, base + ".policy") << "\n";
    emit(out_path(out_dir, base + "_eval.csv"),
         eval_episodes_csv(result.eval));
    emit(out_path(out_dir, base + "_report.csv"),
         pipeline_csv(result, config));
    std::cout << "demos " << result.demos.trajectories.size() << "/"
              << num_demos << ", imitation success "
              << result.eval.success_rate << " over " << eval_episodes
              << " episodes, " << timer.seconds() << "s\n";
    if (result.shortfall) {
      std::cerr << "partial: collection fell short of " << num_demos
                << " demonstrations\n";
      return 3;
    }
    return 0;
  }
};

void add_common(CLI::App* cmd, std::uint64_t& seed, std::string& out_dir,
                double* time_cap = nullptr, int* threads = nullptr) {
  cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
  cmd->add_option("--out-dir", out_dir,
                  "Output directory (default: $P2D2_OUT_DIR or .)");
  if (time_cap) {
    cmd->add_option("--time-cap", *time_cap,
                    "Wall-clock cap in seconds (0: unlimited)")
        ->capture_default_str();
  }
  if (threads) {
    cmd->add_option("--threads", *threads,
                    "Worker threads (0: hardware default); never changes "
                    "output bytes")
        ->capture_default_str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Demonstration discovery by goal-biased random trees, with "
      "imitation, expert baselines, and tail-bound verification"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Read options from a key-value file ([subcommand] "
                 "sections, key=value lines)");
  app.failure_message(CLI::FailureMessage::help);

  const std::string env_help = "Environment name (one of: " + [] {
    std::string names;
    for (const std::string& n : env_names()) {
      names += names.empty() ? n : ", " + n;
    }
    return names;
  }() + ")";

  PlanCmd plan;
  {
    CLI::App* cmd = app.add_subcommand(
        "plan", "Discover demonstrations by growing search trees");
    cmd->add_option("--env", plan.env_name, env_help)->required();
    plan.planner.add_to(cmd, 20000);
    cmd->add_option("--n", plan.num_demos, "Demonstrations to collect")
        ->capture_default_str();
    cmd->add_option("--attempt-cap", plan.attempt_cap,
                    "Tree attempts allowed per requested demonstration")
        ->capture_default_str();
    cmd->add_option("--base", plan.base,
                    "Output basename (default: plan_<env>)");
    cmd->add_flag("--dump-constants", plan.dump_constants,
                  "Print the environment constants report and exit");
    add_common(cmd, plan.seed, plan.out_dir, &plan.time_cap);
  }

  ImitateCmd imitate;
  {
    CLI::App* cmd = app.add_subcommand(
        "imitate", "Fit the regression policy on a demonstration file");
    cmd->add_option("--demos", imitate.demos_path, "Demonstration file")
        ->required()
        ->check(CLI::ExistingFile);
    imitate.rff.add_to(cmd);
    cmd->add_option("--out", imitate.out_file,
                    "Policy filename (default: <env>.policy)");
    add_common(cmd, imitate.seed, imitate.out_dir);
  }

  EvalCmd eval;
  {
    CLI::App* cmd = app.add_subcommand(
        "eval", "Evaluate a saved policy or an expert over fresh episodes");
    CLI::Option* pol =
        cmd->add_option("--policy", eval.policy_path, "Saved policy file")
            ->check(CLI::ExistingFile);
    CLI::Option* exp = cmd->add_option(
        "--expert", eval.expert_env, "Evaluate the expert for this environment");
    pol->excludes(exp);
    cmd->add_option("--episodes", eval.episodes, "Evaluation episodes")
        ->capture_default_str();
    cmd->add_option("--gamma", eval.gamma, "Discount factor")
        ->capture_default_str();
    cmd->add_option("--base", eval.base,
                    "Output basename (default: eval_<policy>_<env>)");
    add_common(cmd, eval.seed, eval.out_dir);
  }

  ExpertCmd expert;
  {
    CLI::App* cmd = app.add_subcommand(
        "expert", "Evaluate a hand-derived solver; optionally save rollouts");
    cmd->add_option("--env", expert.env_name, env_help)->required();
    cmd->add_option("--episodes", expert.episodes, "Evaluation episodes")
        ->capture_default_str();
    cmd->add_option("--save-demos", expert.save_demos_n,
                    "Also save this many successful rollouts as a "
                    "demonstration set")
        ->capture_default_str();
    cmd->add_option("--gamma", expert.gamma, "Discount factor")
        ->capture_default_str();
    cmd->add_option("--base", expert.base,
                    "Output basename (default: expert_<env>)");
    cmd->add_flag("--dump-constants", expert.dump_constants,
                  "Print the environment constants report and exit");
    add_common(cmd, expert.seed, expert.out_dir, &expert.time_cap);
  }

  CurveCmd curve;
  {
    CLI::App* cmd = app.add_subcommand(
        "failure-curve",
        "Failure probability vs budget with fitted exponential envelope");
    cmd->add_option("--env", curve.env_name, env_help)->required();
    curve.planner.add_to(cmd, 0);
    cmd->get_option("--k")->description(
        "Ignored; the grid sets each run's budget");
    cmd->add_option("--grid", curve.grid,
                    "Strictly increasing budgets (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--seeds", curve.seeds_per_point,
                    "Seeds per grid point (>= 30)")
        ->capture_default_str();
    cmd->add_flag("--svg", curve.svg, "Also render an SVG plot");
    cmd->add_option("--base", curve.base,
                    "Output basename (default: curve_<env>)");
    cmd->add_flag("--dump-constants", curve.dump_constants,
                  "Print the environment constants report and exit");
    add_common(cmd, curve.seed, curve.out_dir, &curve.time_cap,
               &curve.threads);
  }

  ComplexityCmd complexity;
  {
    CLI::App* cmd = app.add_subcommand(
        "complexity-check",
        "Mean hitting time vs the bound from the fitted tail constants");
    cmd->add_option("--env", complexity.env_name, env_help)->required();
    complexity.planner.add_to(cmd, 0);
    cmd->get_option("--k")->description(
        "Ignored; the grid and --budget-cap set budgets");
    cmd->add_option("--grid", complexity.grid,
                    "Budgets for the tail fit (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--seeds", complexity.seeds_per_point,
                    "Seeds per grid point (>= 30)")
        ->capture_default_str();
    cmd->add_option("--hit-seeds", complexity.hit_seeds,
                    "Seeds for hitting-time measurement")
        ->capture_default_str();
    cmd->add_option("--budget-cap", complexity.budget_cap,
                    "Iteration cap per hitting-time run")
        ->capture_default_str();
    cmd->add_option("--base", complexity.base,
                    "Output basename (default: complexity_<env>)");
    cmd->add_flag("--dump-constants", complexity.dump_constants,
                  "Print the environment constants report and exit");
    add_common(cmd, complexity.seed, complexity.out_dir,
               &complexity.time_cap, &complexity.threads);
  }

  SurfaceCmd surface;
  {
    CLI::App* cmd = app.add_subcommand(
        "surface", "Mean return of the 2-parameter linear policy on a grid");
    cmd->add_option("--env", surface.env_name, env_help)
        ->capture_default_str();
    cmd->add_option("--theta0", surface.theta0,
                    "First-parameter axis as lo,hi,count")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    cmd->add_option("--theta1", surface.theta1,
                    "Second-parameter axis as lo,hi,count")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    cmd->add_option("--episodes", surface.episodes_per_cell,
                    "Episodes per grid cell")
        ->capture_default_str();
    cmd->add_flag("--svg", surface.svg, "Also render an SVG heatmap");
    cmd->add_option("--base", surface.base,
                    "Output basename (default: surface_<env>)");
    cmd->add_flag("--dump-constants", surface.dump_constants,
                  "Print the environment constants report and exit");
    add_common(cmd, surface.seed, surface.out_dir, &surface.time_cap,
               &surface.threads);
  }

  PipelineCmd pipeline;
  {
    CLI::App* cmd = app.add_subcommand(
        "pipeline", "Collect demonstrations, fit the policy, evaluate it");
    cmd->add_option("--env", pipeline.env_name, env_help)->required();
    pipeline.planner.add_to(cmd, 20000);
    pipeline.rff.add_to(cmd);
    cmd->add_option("--demos", pipeline.num_demos,
                    "Demonstrations to collect")
        ->capture_default_str();
    cmd->add_option("--eval-episodes", pipeline.eval_episodes,
                    "Evaluation episodes")
        ->capture_default_str();
    cmd->add_option("--attempt-cap", pipeline.attempt_cap,
                    "Tree attempts allowed per requested demonstration")
        ->capture_default_str();
    cmd->add_option("--base", pipeline.base,
                    "Output basename (default: pipeline_<env>)");
    cmd->add_flag("--dump-constants", pipeline.dump_constants,
                  "Print the environment constants report and exit");
    add_common(cmd, pipeline.seed, pipeline.out_dir, &pipeline.time_cap);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand("plan")) return plan.run();
    if (app.got_subcommand("imitate")) return imitate.run();
    if (app.got_subcommand("eval")) {
      if (eval.policy_path.empty() == eval.expert_env.empty()) {
        std::cerr << "error: pass exactly one of --policy or --expert\n";
        return 1;
      }
      return eval.run();
    }
    if (app.got_subcommand("expert")) return expert.run();
    if (app.got_subcommand("failure-curve")) return curve.run();
    if (app.got_subcommand("complexity-check")) return complexity.run();
    if (app.got_subcommand("surface")) return surface.run();
    if (app.got_subcommand("pipeline")) return pipeline.run();
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
