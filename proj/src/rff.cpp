#include "p2d2/rff.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "p2d2/demo_store.hpp"
#include "p2d2/envs.hpp"
#include "p2d2/util.hpp"

namespace p2d2 {

using json = nlohmann::json;

namespace {
constexpr int kSchemaVersion = 1;
constexpr const char* kPolicySchema = "p2d2.policy";
constexpr double kTwoPi = 6.283185307179586476925286766559;

[[noreturn]] void load_fail(const std::string& field, const std::string& why) {
  throw std::runtime_error("load error: field '" + field + "': " + why);
}

json require(const json& j, const char* field) {
  if (!j.contains(field)) load_fail(field, "missing");
  return j.at(field);
}

Eigen::VectorXd vec_from_json(const json& arr, const char* field) {
  if (!arr.is_array()) load_fail(field, "not an array");
  Eigen::VectorXd v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) load_fail(field, "non-numeric entry");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

json vec_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}
}  // namespace

void RffConfig::validate() const {
  if (num_features < 1) {
    throw std::invalid_argument("RffConfig: num_features must be >= 1");
  }
  if (!(lengthscale > 0.0) || !(prior_precision > 0.0) ||
      !(noise_precision > 0.0)) {
    throw std::invalid_argument(
        "RffConfig: lengthscale, prior_precision, and noise_precision must "
        "be positive");
  }
}

Eigen::VectorXd RffFeatureMap::operator()(
    const Eigen::VectorXd& x_norm) const {
  if (x_norm.size() != frequencies.cols()) {
    throw std::invalid_argument("RffFeatureMap: input dimension mismatch");
  }
  const double scale = std::sqrt(2.0 / features());
  return (scale * ((frequencies * x_norm + phases).array().cos())).matrix();
}

RffFeatureMap RffFeatureMap::draw(int state_dim, const RffConfig& config,
                                  Rng& rng) {
  config.validate();
  if (state_dim < 1) {
    throw std::invalid_argument("RffFeatureMap: state_dim must be >= 1");
  }
  RffFeatureMap map;
  map.lengthscale = config.lengthscale;
  map.frequencies.resize(config.num_features, state_dim);
  map.phases.resize(config.num_features);
  for (int i = 0; i < config.num_features; ++i) {
    for (int j = 0; j < state_dim; ++j) {
      map.frequencies(i, j) = rng.normal() / config.lengthscale;
    }
  }
  for (int i = 0; i < config.num_features; ++i) {
    map.phases[i] = rng.uniform(0.0, kTwoPi);
  }
  return map;
}

Eigen::MatrixXd blr_solve(const Eigen::MatrixXd& phi,
                          const Eigen::MatrixXd& targets, double alpha,
                          double beta) {
  if (phi.rows() < 1) throw std::invalid_argument("blr_solve: no data rows");
  if (phi.rows() != targets.rows()) {
    throw std::invalid_argument("blr_solve: row count mismatch");
  }
  if (!phi.allFinite()) {
    throw std::invalid_argument("blr_solve: non-finite features");
  }
  if (!targets.allFinite()) {
    throw std::invalid_argument("blr_solve: non-finite targets");
  }
  Eigen::MatrixXd a = beta * (phi.transpose() * phi);
  a.diagonal().array() += alpha;
  Eigen::MatrixXd rhs = beta * (phi.transpose() * targets);
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(
        "blr_solve: Cholesky factorization failed; the normal-equations "
        "matrix is not numerically positive definite");
  }
  Eigen::MatrixXd weights = llt.solve(rhs);
  const double a_norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  Eigen::MatrixXd residual = a * weights - rhs;
  for (Eigen::Index c = 0; c < weights.cols(); ++c) {
    const double scale = a_norm * std::max(1.0, weights.col(c).lpNorm<Eigen::Infinity>()) +
                         rhs.col(c).lpNorm<Eigen::Infinity>();
    if (residual.col(c).lpNorm<Eigen::Infinity>() >= 1e-8 * scale) {
      throw std::runtime_error(
          "blr_solve: normal-equations residual exceeds tolerance");
    }
  }
  return weights;
}

RffPolicy::RffPolicy(EnvSpec spec, std::string env_constants_hash,
                     RffConfig config, RffFeatureMap map,
                     Eigen::MatrixXd weight_means)
    : spec_(std::move(spec)),
      env_constants_hash_(std::move(env_constants_hash)),
      config_(std::move(config)),
      map_(std::move(map)),
      weight_means_(std::move(weight_means)) {
  config_.validate();
  if (map_.dim() != spec_.state_dim || map_.features() != config_.num_features ||
      weight_means_.rows() != spec_.action_dim ||
      weight_means_.cols() != config_.num_features) {
    throw std::invalid_argument("RffPolicy: inconsistent shapes");
  }
}

ActionVec RffPolicy::act(const StateVec& s) const {
  Eigen::VectorXd phi = map_(normalize(spec_, s));
  return spec_.action_bounds.clamp(weight_means_ * phi);
}

RffPolicy fit_policy(const Env& env, const DemoSet& demos,
                     const RffConfig& config, Rng rng) {
  config.validate();
  const EnvSpec& spec = env.spec();
  if (demos.env_name != spec.name) {
    throw std::invalid_argument("fit_policy: demo set is for environment '" +
                                demos.env_name + "', not '" + spec.name + "'");
  }
  if (demos.env_constants_hash != constants_hash(env)) {
    throw std::invalid_argument(
        "fit_policy: demo set was built with different environment constants");
  }
  Eigen::Index pairs = 0;
  for (const Trajectory& t : demos.trajectories) pairs += t.actions.size();
  if (pairs == 0) {
    throw std::invalid_argument(
        "fit_policy: demonstration set has no state-action pairs");
  }
  RffFeatureMap map = RffFeatureMap::draw(spec.state_dim, config, rng);
  Eigen::MatrixXd phi(pairs, config.num_features);
  Eigen::MatrixXd targets(pairs, spec.action_dim);
  Eigen::Index row = 0;
  for (const Trajectory& t : demos.trajectories) {
    for (size_t step = 0; step < t.actions.size(); ++step) {
      phi.row(row) = map(normalize(spec, t.states[step])).transpose();
      targets.row(row) = t.actions[step].transpose();
      ++row;
    }
  }
  Eigen::MatrixXd weights = blr_solve(phi, targets, config.prior_precision,
                                      config.noise_precision);
  return RffPolicy(spec, demos.env_constants_hash, config, std::move(map),
                   weights.transpose());
}

std::string serialize_policy(const RffPolicy& policy) {
  const RffConfig& c = policy.config();
  json header{{"schema", kPolicySchema},
              {"version", kSchemaVersion},
              {"env", policy.spec().name},
              {"env_constants_hash", policy.env_constants_hash()},
              {"config",
               {{"num_features", c.num_features},
                {"lengthscale", c.lengthscale},
                {"prior_precision", c.prior_precision},
                {"noise_precision", c.noise_precision}}},
              {"state_dim", policy.spec().state_dim},
              {"action_dim", policy.spec().action_dim},
              {"count", c.num_features}};
  std::ostringstream out;
  out << header.dump() << "\n";
  const RffFeatureMap& map = policy.feature_map();
  for (int i = 0; i < map.features(); ++i) {
    json record{{"frequencies", vec_to_json(map.frequencies.row(i).transpose())},
                {"phase", map.phases[i]},
                {"weights", vec_to_json(policy.weight_means().col(i))}};
    out << record.dump() << "\n";
  }
  return out.str();
}

RffPolicy parse_policy(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) lines.push_back(line);
    }
  }
  if (lines.empty()) load_fail("header", "empty file");
  json h = json::parse(lines[0], nullptr, /*allow_exceptions=*/false);
  if (h.is_discarded()) load_fail("header", "not valid JSON");
  if (require(h, "schema").get<std::string>() != kPolicySchema) {
    load_fail("schema", "expected " + std::string(kPolicySchema));
  }
  if (require(h, "version").get<int>() != kSchemaVersion) {
    load_fail("version", "unsupported schema version");
  }
  std::string env_name = require(h, "env").get<std::string>();
  std::string hash = require(h, "env_constants_hash").get<std::string>();
  EnvSpec spec;
  {
    auto env = make_env(env_name);  // throws on unknown name
    if (hash != constants_hash(*env)) {
      load_fail("env_constants_hash",
                "file written with different environment constants");
    }
    spec = env->spec();
  }
  json jc = require(h, "config");
  RffConfig config;
  config.num_features = require(jc, "num_features").get<int>();
  config.lengthscale = require(jc, "lengthscale").get<double>();
  config.prior_precision = require(jc, "prior_precision").get<double>();
  config.noise_precision = require(jc, "noise_precision").get<double>();
  config.validate();
  if (require(h, "state_dim").get<int>() != spec.state_dim) {
    load_fail("state_dim", "does not match the environment");
  }
  if (require(h, "action_dim").get<int>() != spec.action_dim) {
    load_fail("action_dim", "does not match the environment");
  }
  size_t count = require(h, "count").get<size_t>();
  if (count != static_cast<size_t>(config.num_features)) {
    load_fail("count", "must equal num_features");
  }
  if (count != lines.size() - 1) load_fail("count", "feature count mismatch");
  RffFeatureMap map;
  map.lengthscale = config.lengthscale;
  map.frequencies.resize(config.num_features, spec.state_dim);
  map.phases.resize(config.num_features);
  Eigen::MatrixXd weight_means(spec.action_dim, config.num_features);
  for (size_t i = 1; i < lines.size(); ++i) {
    json j = json::parse(lines[i], nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) load_fail("feature", "not valid JSON");
    Eigen::VectorXd freq = vec_from_json(require(j, "frequencies"), "frequencies");
    if (freq.size() != spec.state_dim) load_fail("frequencies", "wrong length");
    if (!require(j, "phase").is_number()) load_fail("phase", "not a number");
    Eigen::VectorXd w = vec_from_json(require(j, "weights"), "weights");
    if (w.size() != spec.action_dim) load_fail("weights", "wrong length");
    map.frequencies.row(i - 1) = freq.transpose();
    map.phases[i - 1] = j.at("phase").get<double>();
    weight_means.col(i - 1) = w;
  }
  return RffPolicy(std::move(spec), std::move(hash), config, std::move(map),
                   std::move(weight_means));
}

void save_policy(const RffPolicy& policy, const std::string& path) {
  write_text_file(path, serialize_policy(policy));
}

RffPolicy load_policy(const std::string& path) {
  return parse_policy(read_text_file(path));
}

}  // namespace p2d2
