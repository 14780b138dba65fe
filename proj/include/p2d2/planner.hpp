#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "p2d2/env.hpp"
#include "p2d2/kdtree.hpp"
#include "p2d2/trajectory.hpp"
#include "p2d2/util.hpp"

namespace p2d2 {

/// Tree-growth parameters. return_weight > 0 turns on return augmentation:
/// nodes are indexed as (state embedding, return_weight * disc_return /
/// horizon) and success additionally requires disc_return >= min_return_rhat
/// when that threshold is set.
struct PlannerConfig {
  int budget_k = 0;
  double goal_bias_pg = 0.05;
  double gamma = 0.99;
  double return_weight = 0.0;
  std::optional<double> min_return_rhat;
  std::uint64_t seed = 0;
  int max_depth = 0;  // 0: use the environment horizon
  bool stop_on_first_goal = false;

  void validate() const;

  /// Success requires goal membership, plus the return threshold when set.
  bool success(bool in_goal, double disc_return) const {
    return in_goal && (!min_return_rhat || disc_return >= *min_return_rhat);
  }
};

struct TreeNode {
  int id = 0;
  StateVec state;
  int parent = -1;          // -1: root
  ActionVec action_in;      // empty for the root
  double reward_in = 0.0;
  int depth = 0;
  double disc_return = 0.0;
  double undisc_return = 0.0;
  bool in_goal = false;
};

struct TreeStats {
  long env_steps = 0;
  long wasted_iterations = 0;  // nearest node already at max depth
  long goal_draws = 0;         // iterations that took the goal-bias branch
  long iterations = 0;
  long first_success_iter = -1;  // 1-based; -1 if no success
};

struct Tree {
  std::string env_name;
  std::uint64_t seed = 0;
  PlannerConfig config;
  std::vector<TreeNode> nodes;
  KdTree index;  // over node embeddings, ids equal node ids
  TreeStats stats;
};

/// Demonstration batch with full provenance for reproduction.
struct DemoSet {
  std::string env_name;
  std::string env_constants_hash;
  PlannerConfig config;
  std::vector<Trajectory> trajectories;
  long total_env_steps = 0;
  std::uint64_t created_with_seed = 0;
  int attempts = 0;
  bool shortfall = false;  // attempt cap or deadline hit before N successes
};

/// Index embedding of one node: the state's metric embedding, plus the
/// weighted normalized return coordinate when return augmentation is on.
Eigen::VectorXd tree_embed(const EnvSpec& spec, const PlannerConfig& config,
                           const StateVec& s, double disc_return);

/// Grows a tree from root s0 for budget_k iterations. Each iteration:
/// sample a uniform state, replace it by a goal draw with probability
/// goal_bias_pg, find the nearest node, sample a uniform action, take one
/// environment step, append the child. Expansions from nodes at max depth
/// are skipped and count against the budget. stop_on_first_goal ends growth
/// as soon as a node satisfies the success criterion (first_success_iter is
/// the same either way; later iterations never affect earlier nodes).
Tree grow_tree(const Env& env, const PlannerConfig& config, const StateVec& s0,
               Rng rng);

/// grow_tree with a root sampled from the initial-state set.
Tree grow_tree(const Env& env, const PlannerConfig& config, Rng rng);

/// Exact nearest node id for a query, lowest id on ties. query_return is
/// the already-normalized return coordinate in [-1, 1], ignored unless
/// return augmentation is on.
int nearest(const Tree& tree, const Env& env, const StateVec& query,
            double query_return = 0.0);

/// Best successful trajectory: among nodes satisfying the success criterion,
/// picks max disc_return (lowest id on ties) and walks parent links. Empty
/// if no node qualifies. A qualifying root yields a length-0 trajectory.
std::optional<Trajectory> extract_best(const Tree& tree, const Env& env);

/// Outer demonstration-collection loop: grows trees from fresh initial
/// states until N successes, the attempt cap (attempt_cap_per_demo * N), or
/// the deadline. Attempt i uses rng.split(i), so results do not depend on
/// how many attempts preceded a success.
DemoSet p2d2_collect(const Env& env, const PlannerConfig& config, int N,
                     Rng rng, int attempt_cap_per_demo = 50,
                     const Deadline& deadline = Deadline());

}  // namespace p2d2
