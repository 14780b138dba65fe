#pragma once

#include <Eigen/Dense>
#include <string>

#include "p2d2/env.hpp"
#include "p2d2/planner.hpp"
#include "p2d2/policy.hpp"
#include "p2d2/rng.hpp"

namespace p2d2 {

/// Hyperparameters of the random-feature regression policy.
struct RffConfig {
  int num_features = 300;        // D
  double lengthscale = 0.3;      // in normalized state space
  double prior_precision = 0.1;  // alpha
  double noise_precision = 1.0;  // beta

  void validate() const;
};

/// Random cosine features phi(x) = sqrt(2/D) * cos(W x + b) with rows of W
/// drawn Normal(0, lengthscale^-2 I) and phases uniform on [0, 2pi), so
/// E[phi(x)' phi(y)] = exp(-|x - y|^2 / (2 lengthscale^2)). Inputs are
/// bounds-normalized states.
struct RffFeatureMap {
  Eigen::MatrixXd frequencies;  // D x state_dim
  Eigen::VectorXd phases;       // D
  double lengthscale = 0.0;

  int features() const { return static_cast<int>(frequencies.rows()); }
  int dim() const { return static_cast<int>(frequencies.cols()); }

  /// phi(x_norm); every entry lies in [-sqrt(2/D), sqrt(2/D)].
  Eigen::VectorXd operator()(const Eigen::VectorXd& x_norm) const;

  static RffFeatureMap draw(int state_dim, const RffConfig& config, Rng& rng);
};

/// Posterior mean weights of Bayesian linear regression, one column per
/// target dimension: solves (beta Phi' Phi + alpha I) W = beta Phi' Y by
/// Cholesky factorization and verifies the residual of every column against
/// the normal equations. Throws if the factorization fails or a residual
/// exceeds 1e-8 times the problem scale.
Eigen::MatrixXd blr_solve(const Eigen::MatrixXd& phi,
                          const Eigen::MatrixXd& targets, double alpha,
                          double beta);

/// Imitation policy: per-action-dimension Bayesian linear regression over
/// random Fourier features of the normalized state. Actions are posterior
/// means clamped to the action box.
class RffPolicy : public Policy {
 public:
  RffPolicy() = default;
  RffPolicy(EnvSpec spec, std::string env_constants_hash, RffConfig config,
            RffFeatureMap map, Eigen::MatrixXd weight_means);

  ActionVec act(const StateVec& s) const override;
  std::string name() const override { return "rff[" + spec_.name + "]"; }

  const EnvSpec& spec() const { return spec_; }
  const std::string& env_constants_hash() const { return env_constants_hash_; }
  const RffConfig& config() const { return config_; }
  const RffFeatureMap& feature_map() const { return map_; }
  /// action_dim x D posterior mean weights.
  const Eigen::MatrixXd& weight_means() const { return weight_means_; }

 private:
  EnvSpec spec_;
  std::string env_constants_hash_;
  RffConfig config_;
  RffFeatureMap map_;
  Eigen::MatrixXd weight_means_;
};

/// Fits the policy on all (state, action) pairs pooled across the
/// demonstration set in trajectory order, then step order. The feature map
/// is drawn from rng, so the result is deterministic given (demos, config,
/// rng). Throws if the set holds no pairs, belongs to a different
/// environment, or produces non-finite features.
RffPolicy fit_policy(const Env& env, const DemoSet& demos,
                     const RffConfig& config, Rng rng);

/// Line-delimited JSON persistence (same container discipline as
/// demonstration sets; conventional extension ".policy"). Round trips are
/// bit-exact; loaders throw std::runtime_error naming the offending field.
std::string serialize_policy(const RffPolicy& policy);
RffPolicy parse_policy(const std::string& text);
void save_policy(const RffPolicy& policy, const std::string& path);
RffPolicy load_policy(const std::string& path);

}  // namespace p2d2
