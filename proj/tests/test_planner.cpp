#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "p2d2/envs.hpp"
#include "p2d2/kdtree.hpp"
#include "p2d2/planner.hpp"

using namespace p2d2;

namespace {
StateVec vec2(double a, double b) {
  StateVec v(2);
  v << a, b;
  return v;
}

ActionVec act1(double a) {
  ActionVec v(1);
  v << a;
  return v;
}
}  // namespace

TEST_CASE("kdtree matches brute force on random points") {
  Rng rng(81);
  for (int dim : {2, 3, 5}) {
    KdTree tree(dim);
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < 2000; ++i) {
      Eigen::VectorXd p(dim);
      for (int d = 0; d < dim; ++d) p[d] = rng.uniform(-1.0, 1.0);
      tree.insert(p);
      pts.push_back(p);
    }
    for (int q = 0; q < 300; ++q) {
      Eigen::VectorXd query(dim);
      for (int d = 0; d < dim; ++d) query[d] = rng.uniform(-1.2, 1.2);
      auto [id, d2] = tree.nearest(query);
      auto [bid, bd2] = brute_force_nearest(pts, query);
      CHECK(id == bid);
      CHECK(d2 == bd2);
    }
  }
}

TEST_CASE("kdtree breaks ties by lowest id") {
  KdTree tree(2);
  Eigen::VectorXd p(2);
  p << 0.5, 0.5;
  tree.insert(p);  // id 0
  Eigen::VectorXd far(2);
  far << -0.9, 0.1;
  tree.insert(far);  // id 1
  tree.insert(p);    // id 2, duplicate of 0
  tree.insert(p);    // id 3, duplicate of 0

  CHECK(tree.nearest(p).first == 0);
  CHECK(tree.nearest(p).second == 0.0);

  // Two points equidistant from the query on either side.
  KdTree sym(1);
  Eigen::VectorXd a(1), b(1), mid(1);
  a << 1.0;
  b << 3.0;
  mid << 2.0;
  sym.insert(b);  // id 0 at 3.0
  sym.insert(a);  // id 1 at 1.0
  CHECK(sym.nearest(mid).first == 0);
}

TEST_CASE("kdtree input validation") {
  KdTree tree(2);
  CHECK_THROWS(tree.nearest(Eigen::VectorXd::Zero(2)));
  CHECK_THROWS(tree.insert(Eigen::VectorXd::Zero(3)));
  CHECK_THROWS(KdTree(0));
}

TEST_CASE("planner config validation") {
  PlannerConfig cfg;
  cfg.budget_k = -1;
  CHECK_THROWS(cfg.validate());
  cfg.budget_k = 10;
  cfg.goal_bias_pg = 1.5;
  CHECK_THROWS(cfg.validate());
  cfg.goal_bias_pg = 0.05;
  cfg.gamma = 1.0;
  CHECK_THROWS(cfg.validate());
  cfg.gamma = 0.99;
  cfg.validate();

  CHECK(cfg.success(true, -50.0));
  CHECK(!cfg.success(false, -50.0));
  cfg.min_return_rhat = -20.0;
  CHECK(cfg.success(true, -19.0));
  CHECK(!cfg.success(true, -21.0));
  CHECK(!cfg.success(false, -19.0));
}

TEST_CASE("zero budget yields root-only tree") {
  MountainCarEnv env;
  PlannerConfig cfg;
  cfg.budget_k = 0;
  Tree tree = grow_tree(env, cfg, Rng(1));
  CHECK(tree.nodes.size() == 1);
  CHECK(tree.nodes[0].parent == -1);
  CHECK(tree.nodes[0].depth == 0);
  CHECK(tree.nodes[0].disc_return == 0.0);
  CHECK(tree.stats.env_steps == 0);
  CHECK(!extract_best(tree, env).has_value());
}

TEST_CASE("root already in goal yields a length-0 trajectory") {
  PendulumEnv env;
  PlannerConfig cfg;
  cfg.budget_k = 0;
  Tree tree = grow_tree(env, cfg, vec2(0.0, 0.0), Rng(3));
  CHECK(tree.nodes[0].in_goal);
  CHECK(tree.stats.first_success_iter == 0);
  auto traj = extract_best(tree, env);
  REQUIRE(traj.has_value());
  CHECK(traj->length() == 0);
  CHECK(traj->states.size() == 1);
  CHECK(traj->success);
  CHECK(traj->disc_return == 0.0);
  CHECK(validate_trajectory(env, *traj, cfg.gamma).valid);

  // With growth, a path that keeps collecting the in-goal cos reward beats
  // the length-0 root on discounted return.
  cfg.budget_k = 10;
  Tree grown = grow_tree(env, cfg, vec2(0.0, 0.0), Rng(3));
  auto better = extract_best(grown, env);
  REQUIRE(better.has_value());
  CHECK(better->disc_return > 0.0);
  CHECK(better->length() > 0);
  CHECK(validate_trajectory(env, *better, cfg.gamma).valid);
}

TEST_CASE("tree nodes replay parent transitions bit-exactly") {
  MountainCarEnv env;
  PlannerConfig cfg;
  cfg.budget_k = 4000;
  cfg.goal_bias_pg = 0.05;
  Tree tree = grow_tree(env, cfg, Rng(1005));
  CHECK(tree.stats.iterations == 4000);
  CHECK(tree.nodes.size() ==
        1 + static_cast<size_t>(cfg.budget_k - tree.stats.wasted_iterations));
  CHECK(tree.stats.env_steps ==
        static_cast<long>(tree.nodes.size()) - 1);

  for (size_t i = 1; i < tree.nodes.size(); ++i) {
    const TreeNode& n = tree.nodes[i];
    const TreeNode& p = tree.nodes[n.parent];
    CHECK(n.parent < n.id);
    CHECK(n.depth == p.depth + 1);
    CHECK(n.depth <= env.spec().horizon);
    StepResult r = env.step(p.state, n.action_in);
    CHECK(r.next_state == n.state);
    CHECK(r.reward == n.reward_in);
    CHECK(n.in_goal == env.in_goal(n.state));
    double disc = p.disc_return +
                  std::pow(cfg.gamma, static_cast<double>(p.depth)) * n.reward_in;
    CHECK(n.disc_return == disc);
  }
}

TEST_CASE("extracted trajectory maximizes discounted return and validates") {
  MountainCarEnv env;
  PlannerConfig cfg;
  cfg.budget_k = 8000;
  cfg.goal_bias_pg = 0.05;
  Tree tree = grow_tree(env, cfg, Rng(1005));
  auto traj = extract_best(tree, env);
  REQUIRE(traj.has_value());
  CHECK(traj->success);
  CHECK(env.in_goal(traj->states.back()));

  double best = -1e300;
  for (const TreeNode& n : tree.nodes) {
    if (n.in_goal) best = std::max(best, n.disc_return);
  }
  CHECK(traj->disc_return == best);

  ValidationReport rep = validate_trajectory(env, *traj, cfg.gamma);
  INFO(rep.error);
  CHECK(rep.valid);

  // Tampering is detected.
  Trajectory bad = *traj;
  bad.states[1][0] += 1e-12;
  CHECK(!validate_trajectory(env, bad, cfg.gamma).valid);
  bad = *traj;
  bad.rewards[0] = 0.0;
  CHECK(!validate_trajectory(env, bad, cfg.gamma).valid);
  bad = *traj;
  bad.disc_return += 1e-6;
  CHECK(!validate_trajectory(env, bad, cfg.gamma).valid);
}

TEST_CASE("trajectory through an interior terminal state is invalid") {
  MountainCarEnv env;
  Trajectory traj;
  traj.env_name = "mountaincar";
  traj.states.push_back(vec2(0.5, 0.0));  // already in the terminal goal
  for (int t = 0; t < 2; ++t) {
    ActionVec a = act1(1.0);
    StepResult r = env.step(traj.states.back(), a);
    traj.actions.push_back(a);
    traj.rewards.push_back(r.reward);
    traj.states.push_back(r.next_state);
    traj.disc_return += std::pow(0.99, t) * r.reward;
    traj.undisc_return += r.reward;
  }
  ValidationReport rep = validate_trajectory(env, traj, 0.99);
  CHECK(!rep.valid);
  CHECK(rep.error.find("interior") != std::string::npos);
}

TEST_CASE("nearest on the tree equals brute force") {
  PendulumEnv env;
  for (double weight : {0.0, 1.0}) {
    PlannerConfig cfg;
    cfg.budget_k = 1500;
    cfg.return_weight = weight;
    Tree tree = grow_tree(env, cfg, Rng(55));
    const double horizon = env.spec().horizon;

    std::vector<Eigen::VectorXd> embeds;
    for (const TreeNode& n : tree.nodes) {
      embeds.push_back(
          tree_embed(env.spec(), cfg, n.state, n.disc_return / horizon));
    }
    Rng qrng(66);
    for (int q = 0; q < 200; ++q) {
      StateVec s = sample_state(env.spec(), qrng);
      double r = qrng.uniform(-1.0, 1.0);
      int got = nearest(tree, env, s, r);
      auto [want, d2] = brute_force_nearest(
          embeds, tree_embed(env.spec(), cfg, s, r));
      (void)d2;
      CHECK(got == want);
    }
  }
}

TEST_CASE("goal bias frequency matches the configured probability") {
  MountainCarEnv env;
  PlannerConfig cfg;
  cfg.budget_k = 100000;
  cfg.goal_bias_pg = 0.25;
  Tree tree = grow_tree(env, cfg, Rng(77));
  double frac = static_cast<double>(tree.stats.goal_draws) / cfg.budget_k;
  double sigma = std::sqrt(0.25 * 0.75 / cfg.budget_k);
  CHECK(std::abs(frac - 0.25) < 3.0 * sigma);
}

TEST_CASE("max depth caps growth and wasted iterations are counted") {
  MountainCarEnv env;
  PlannerConfig cfg;
  cfg.budget_k = 2000;
  cfg.max_depth = 5;
  Tree tree = grow_tree(env, cfg, Rng(9));
  CHECK(tree.stats.iterations == 2000);
  CHECK(tree.stats.wasted_iterations > 0);
  CHECK(tree.nodes.size() ==
        1 + static_cast<size_t>(2000 - tree.stats.wasted_iterations));
  for (const TreeNode& n : tree.nodes) CHECK(n.depth <= 5);
}

TEST_CASE("return augmentation changes the success criterion") {
  MountainCarEnv env;
  PlannerConfig cfg;
  cfg.budget_k = 8000;
  cfg.goal_bias_pg = 0.05;
  cfg.return_weight = 1.0;

  // Impossible threshold: every transition pays -1, so returns are negative.
  cfg.min_return_rhat = 0.0;
  Tree hard = grow_tree(env, cfg, Rng(1005));
  bool any_goal = false;
  for (const TreeNode& n : hard.nodes) any_goal |= n.in_goal;
  CHECK(any_goal);
  CHECK(!extract_best(hard, env).has_value());
  CHECK(hard.stats.first_success_iter == -1);

  // Trivial threshold: any goal node qualifies.
  cfg.min_return_rhat = -200.0;
  Tree easy = grow_tree(env, cfg, Rng(1005));
  auto traj = extract_best(easy, env);
  REQUIRE(traj.has_value());
  CHECK(traj->disc_return >= -200.0);
  CHECK(env.in_goal(traj->states.back()));
}

TEST_CASE("same seed reproduces the tree, different seed does not") {
  MountainCarEnv env;
  PlannerConfig cfg;
  cfg.budget_k = 500;
  Tree a = grow_tree(env, cfg, Rng(4242));
  Tree b = grow_tree(env, cfg, Rng(4242));
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].state == b.nodes[i].state);
    CHECK(a.nodes[i].parent == b.nodes[i].parent);
  }
  CHECK(a.stats.goal_draws == b.stats.goal_draws);

  Tree c = grow_tree(env, cfg, Rng(4243));
  CHECK(!(c.nodes[1].state == a.nodes[1].state));
}

TEST_CASE("growth is prefix-stable in the budget") {
  // The failure curve reads success-at-k for several k off one tree per
  // seed; that requires iterations beyond k to never affect the first k.
  MountainCarEnv env;
  PlannerConfig cfg;
  cfg.budget_k = 300;
  Tree small = grow_tree(env, cfg, Rng(31337));
  cfg.budget_k = 600;
  Tree big = grow_tree(env, cfg, Rng(31337));
  REQUIRE(big.nodes.size() >= small.nodes.size());
  for (size_t i = 0; i < small.nodes.size(); ++i) {
    CHECK(small.nodes[i].state == big.nodes[i].state);
    CHECK(small.nodes[i].parent == big.nodes[i].parent);
  }
}

TEST_CASE("stop_on_first_goal stops without changing the hitting iteration") {
  MountainCarEnv env;
  PlannerConfig cfg;
  cfg.budget_k = 8000;
  cfg.goal_bias_pg = 0.05;
  cfg.stop_on_first_goal = true;
  Tree stopped = grow_tree(env, cfg, Rng(1005));
  REQUIRE(stopped.stats.first_success_iter > 0);

  cfg.stop_on_first_goal = false;
  Tree full = grow_tree(env, cfg, Rng(1005));
  CHECK(full.stats.first_success_iter == stopped.stats.first_success_iter);
  CHECK(full.stats.iterations == 8000);
  CHECK(stopped.stats.iterations == stopped.stats.first_success_iter);
}

TEST_CASE("p2d2_collect gathers N validated demonstrations") {
  PendulumEnv env;
  PlannerConfig cfg;
  cfg.budget_k = 4000;
  cfg.goal_bias_pg = 0.05;
  DemoSet set = p2d2_collect(env, cfg, 3, Rng(2025));
  CHECK(!set.shortfall);
  REQUIRE(set.trajectories.size() == 3);
  CHECK(set.env_name == "pendulum");
  CHECK(set.env_constants_hash == constants_hash(env));
  long steps = 0;
  for (const Trajectory& t : set.trajectories) {
    CHECK(t.success);
    CHECK(std::cos(t.states.back()[0]) > 0.99);
    CHECK(validate_trajectory(env, t, cfg.gamma).valid);
    steps += t.length();
  }
  CHECK(set.total_env_steps >= steps);
  CHECK(set.attempts >= 3);

  // Same master seed reproduces the set exactly.
  DemoSet again = p2d2_collect(env, cfg, 3, Rng(2025));
  REQUIRE(again.trajectories.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(again.trajectories[i].states.back() ==
          set.trajectories[i].states.back());
  }
}

TEST_CASE("p2d2_collect edge cases") {
  AcrobotEnv env;
  PlannerConfig cfg;
  cfg.budget_k = 1;
  DemoSet none = p2d2_collect(env, cfg, 0, Rng(1));
  CHECK(none.trajectories.empty());
  CHECK(none.total_env_steps == 0);
  CHECK(!none.shortfall);

  DemoSet starved = p2d2_collect(env, cfg, 1, Rng(1), 1);
  CHECK(starved.shortfall);
  CHECK(starved.attempts == 1);
  CHECK(starved.trajectories.empty());
}
