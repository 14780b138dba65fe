#include "p2d2/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "p2d2/envs.hpp"

namespace p2d2 {

void PlannerConfig::validate() const {
  if (budget_k < 0) throw std::invalid_argument("PlannerConfig: budget_k < 0");
  if (goal_bias_pg < 0.0 || goal_bias_pg > 1.0) {
    throw std::invalid_argument("PlannerConfig: goal_bias_pg outside [0, 1]");
  }
  if (gamma < 0.0 || gamma >= 1.0) {
    throw std::invalid_argument("PlannerConfig: gamma outside [0, 1)");
  }
  if (return_weight < 0.0) {
    throw std::invalid_argument("PlannerConfig: return_weight < 0");
  }
  if (max_depth < 0) throw std::invalid_argument("PlannerConfig: max_depth < 0");
}

namespace {
int effective_max_depth(const EnvSpec& spec, const PlannerConfig& config) {
  return config.max_depth > 0 ? config.max_depth : spec.horizon;
}

bool expandable(const Env& env, const TreeNode& node, int max_depth) {
  if (node.depth >= max_depth) return false;
  // Terminal goal states end the episode; growing past them would record
  // transitions that cannot occur in a rollout.
  if (node.in_goal && env.goal_terminal()) return false;
  return true;
}
}  // namespace

Eigen::VectorXd tree_embed(const EnvSpec& spec, const PlannerConfig& config,
                           const StateVec& s, double return_norm) {
  Eigen::VectorXd e = embed_state(spec, s);
  if (config.return_weight <= 0.0) return e;
  Eigen::VectorXd out(e.size() + 1);
  out.head(e.size()) = e;
  out[e.size()] = config.return_weight * return_norm;
  return out;
}

Tree grow_tree(const Env& env, const PlannerConfig& config, const StateVec& s0,
               Rng rng) {
  config.validate();
  const EnvSpec& spec = env.spec();
  const int max_depth = effective_max_depth(spec, config);
  const double horizon = static_cast<double>(max_depth);
  const bool augmented = config.return_weight > 0.0;

  Tree tree{spec.name,
            rng.seed(),
            config,
            {},
            KdTree(embedded_dim(spec) + (augmented ? 1 : 0)),
            {}};

  TreeNode root;
  root.id = 0;
  root.state = wrap_state(spec, s0);
  root.in_goal = env.in_goal(root.state);
  tree.nodes.push_back(root);
  tree.index.insert(tree_embed(spec, config, root.state, 0.0));
  if (config.success(root.in_goal, 0.0)) {
    tree.stats.first_success_iter = 0;
    if (config.stop_on_first_goal) return tree;
  }

  for (int it = 1; it <= config.budget_k; ++it) {
    ++tree.stats.iterations;

    StateVec s_rand = sample_state(spec, rng);
    bool goal_draw = rng.uniform() <= config.goal_bias_pg;
    if (goal_draw) {
      s_rand = env.sample_goal(rng);
      ++tree.stats.goal_draws;
    }
    double r_rand = 0.0;
    if (augmented) {
      if (goal_draw && config.min_return_rhat) {
        // Goal draws target the augmented goal set: return above threshold.
        double lo = std::max(-1.0, std::min(1.0, *config.min_return_rhat / horizon));
        r_rand = rng.uniform(lo, 1.0);
      } else {
        r_rand = rng.uniform(-1.0, 1.0);
      }
    }

    auto [near_id, d2] = tree.index.nearest(tree_embed(spec, config, s_rand, r_rand));
    (void)d2;
    const TreeNode& near = tree.nodes[near_id];
    if (!expandable(env, near, max_depth)) {
      ++tree.stats.wasted_iterations;
      continue;
    }

    ActionVec a(spec.action_dim);
    for (int i = 0; i < spec.action_dim; ++i) {
      a[i] = rng.uniform(spec.action_bounds.lower[i], spec.action_bounds.upper[i]);
    }
    StepResult sr = env.step(near.state, a);
    ++tree.stats.env_steps;

    TreeNode child;
    child.id = static_cast<int>(tree.nodes.size());
    child.state = sr.next_state;
    child.parent = near_id;
    child.action_in = a;
    child.reward_in = sr.reward;
    child.depth = near.depth + 1;
    child.disc_return =
        near.disc_return + std::pow(config.gamma, static_cast<double>(near.depth)) * sr.reward;
    child.undisc_return = near.undisc_return + sr.reward;
    child.in_goal = sr.in_goal;
    tree.index.insert(tree_embed(spec, config, child.state, child.disc_return / horizon));
    tree.nodes.push_back(std::move(child));

    const TreeNode& added = tree.nodes.back();
    if (tree.stats.first_success_iter < 0 &&
        config.success(added.in_goal, added.disc_return)) {
      tree.stats.first_success_iter = it;
      if (config.stop_on_first_goal) break;
    }
  }
  return tree;
}

Tree grow_tree(const Env& env, const PlannerConfig& config, Rng rng) {
  StateVec s0 = env.sample_initial(rng);
  return grow_tree(env, config, s0, rng);
}

int nearest(const Tree& tree, const Env& env, const StateVec& query,
            double query_return) {
  return tree.index
      .nearest(tree_embed(env.spec(), tree.config, query, query_return))
      .first;
}

std::optional<Trajectory> extract_best(const Tree& tree, const Env& env) {
  const PlannerConfig& config = tree.config;
  int best = -1;
  for (const TreeNode& n : tree.nodes) {
    if (!config.success(n.in_goal, n.disc_return)) continue;
    if (best < 0 || n.disc_return > tree.nodes[best].disc_return) best = n.id;
  }
  if (best < 0) return std::nullopt;

  std::vector<int> path;
  for (int id = best; id != -1; id = tree.nodes[id].parent) path.push_back(id);
  std::reverse(path.begin(), path.end());

  Trajectory traj;
  traj.env_name = tree.env_name;
  traj.seed = tree.seed;
  traj.success = true;
  traj.disc_return = tree.nodes[best].disc_return;
  traj.undisc_return = tree.nodes[best].undisc_return;
  traj.states.reserve(path.size());
  for (int id : path) traj.states.push_back(tree.nodes[id].state);
  for (size_t i = 1; i < path.size(); ++i) {
    traj.actions.push_back(tree.nodes[path[i]].action_in);
    traj.rewards.push_back(tree.nodes[path[i]].reward_in);
  }
  return traj;
}

DemoSet p2d2_collect(const Env& env, const PlannerConfig& config, int N,
                     Rng rng, int attempt_cap_per_demo,
                     const Deadline& deadline) {
  if (N < 0) throw std::invalid_argument("p2d2_collect: N < 0");
  if (attempt_cap_per_demo < 1) {
    throw std::invalid_argument("p2d2_collect: attempt_cap_per_demo < 1");
  }
  DemoSet set;
  set.env_name = env.spec().name;
  set.env_constants_hash = constants_hash(env);
  set.config = config;
  set.created_with_seed = rng.seed();

  const long cap = static_cast<long>(attempt_cap_per_demo) * N;
  while (static_cast<int>(set.trajectories.size()) < N &&
         set.attempts < cap && !deadline.expired()) {
    Rng attempt_rng = rng.split(static_cast<std::uint64_t>(set.attempts));
    ++set.attempts;
    Tree tree = grow_tree(env, config, attempt_rng);
    set.total_env_steps += tree.stats.env_steps;
    if (auto traj = extract_best(tree, env)) {
      set.trajectories.push_back(std::move(*traj));
    }
  }
  set.shortfall = static_cast<int>(set.trajectories.size()) < N;
  return set;
}

}  // namespace p2d2
