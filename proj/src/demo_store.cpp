#include "p2d2/demo_store.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "p2d2/envs.hpp"
#include "p2d2/util.hpp"

namespace p2d2 {

using json = nlohmann::json;

namespace {
constexpr int kSchemaVersion = 1;
constexpr const char* kDemosSchema = "p2d2.demos";
constexpr const char* kTreeSchema = "p2d2.tree";

[[noreturn]] void load_fail(const std::string& field, const std::string& why) {
  throw std::runtime_error("load error: field '" + field + "': " + why);
}

json require(const json& j, const char* field) {
  if (!j.contains(field)) load_fail(field, "missing");
  return j.at(field);
}

json vec_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
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

json config_to_json(const PlannerConfig& c) {
  json j{{"budget_k", c.budget_k},
         {"goal_bias_pg", c.goal_bias_pg},
         {"gamma", c.gamma},
         {"return_weight", c.return_weight},
         {"seed", c.seed},
         {"max_depth", c.max_depth},
         {"stop_on_first_goal", c.stop_on_first_goal}};
  if (c.min_return_rhat) j["min_return_rhat"] = *c.min_return_rhat;
  return j;
}

PlannerConfig config_from_json(const json& j) {
  PlannerConfig c;
  c.budget_k = require(j, "budget_k").get<int>();
  c.goal_bias_pg = require(j, "goal_bias_pg").get<double>();
  c.gamma = require(j, "gamma").get<double>();
  c.return_weight = require(j, "return_weight").get<double>();
  c.seed = require(j, "seed").get<std::uint64_t>();
  c.max_depth = require(j, "max_depth").get<int>();
  c.stop_on_first_goal = require(j, "stop_on_first_goal").get<bool>();
  if (j.contains("min_return_rhat")) {
    c.min_return_rhat = j.at("min_return_rhat").get<double>();
  }
  return c;
}

json trajectory_to_json(const Trajectory& t) {
  json states = json::array();
  for (const StateVec& s : t.states) states.push_back(vec_to_json(s));
  json actions = json::array();
  for (const ActionVec& a : t.actions) actions.push_back(vec_to_json(a));
  return json{{"states", states},
              {"actions", actions},
              {"rewards", t.rewards},
              {"disc_return", t.disc_return},
              {"undisc_return", t.undisc_return},
              {"success", t.success},
              {"env_name", t.env_name},
              {"seed", t.seed}};
}

Trajectory trajectory_from_json(const json& j) {
  Trajectory t;
  for (const json& s : require(j, "states")) {
    t.states.push_back(vec_from_json(s, "states"));
  }
  for (const json& a : require(j, "actions")) {
    t.actions.push_back(vec_from_json(a, "actions"));
  }
  t.rewards = require(j, "rewards").get<std::vector<double>>();
  t.disc_return = require(j, "disc_return").get<double>();
  t.undisc_return = require(j, "undisc_return").get<double>();
  t.success = require(j, "success").get<bool>();
  t.env_name = require(j, "env_name").get<std::string>();
  t.seed = require(j, "seed").get<std::uint64_t>();
  if (t.states.size() != t.actions.size() + 1) {
    load_fail("states", "length must be actions length + 1");
  }
  if (t.rewards.size() != t.actions.size()) {
    load_fail("rewards", "length must equal actions length");
  }
  return t;
}

json parse_header(const std::string& line, const char* schema) {
  json h = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (h.is_discarded()) load_fail("header", "not valid JSON");
  if (require(h, "schema").get<std::string>() != schema) {
    load_fail("schema", "expected " + std::string(schema));
  }
  if (require(h, "version").get<int>() != kSchemaVersion) {
    load_fail("version", "unsupported schema version");
  }
  std::string env_name = require(h, "env").get<std::string>();
  std::string hash = require(h, "env_constants_hash").get<std::string>();
  if (hash != constants_hash(*make_env(env_name))) {
    load_fail("env_constants_hash",
              "file written with different environment constants");
  }
  return h;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}
}  // namespace

std::string serialize_demos(const DemoSet& set) {
  std::ostringstream out;
  json header{{"schema", kDemosSchema},
              {"version", kSchemaVersion},
              {"env", set.env_name},
              {"env_constants_hash", set.env_constants_hash},
              {"config", config_to_json(set.config)},
              {"total_env_steps", set.total_env_steps},
              {"created_with_seed", set.created_with_seed},
              {"attempts", set.attempts},
              {"shortfall", set.shortfall},
              {"count", set.trajectories.size()}};
  out << header.dump() << "\n";
  for (const Trajectory& t : set.trajectories) {
    out << trajectory_to_json(t).dump() << "\n";
  }
  return out.str();
}

DemoSet parse_demos(const std::string& text) {
  std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) load_fail("header", "empty file");
  json h = parse_header(lines[0], kDemosSchema);

  DemoSet set;
  set.env_name = h.at("env").get<std::string>();
  set.env_constants_hash = h.at("env_constants_hash").get<std::string>();
  set.config = config_from_json(require(h, "config"));
  set.total_env_steps = require(h, "total_env_steps").get<long>();
  set.created_with_seed = require(h, "created_with_seed").get<std::uint64_t>();
  set.attempts = require(h, "attempts").get<int>();
  set.shortfall = require(h, "shortfall").get<bool>();
  size_t count = require(h, "count").get<size_t>();
  if (count != lines.size() - 1) load_fail("count", "trajectory count mismatch");
  for (size_t i = 1; i < lines.size(); ++i) {
    json j = json::parse(lines[i], nullptr, false);
    if (j.is_discarded()) load_fail("trajectory", "not valid JSON");
    set.trajectories.push_back(trajectory_from_json(j));
    if (set.trajectories.back().env_name != set.env_name) {
      load_fail("env_name", "trajectory environment differs from header");
    }
  }
  return set;
}

std::string serialize_tree(const Tree& tree) {
  std::ostringstream out;
  json header{{"schema", kTreeSchema},
              {"version", kSchemaVersion},
              {"env", tree.env_name},
              {"env_constants_hash", constants_hash(*make_env(tree.env_name))},
              {"config", config_to_json(tree.config)},
              {"seed", tree.seed},
              {"count", tree.nodes.size()},
              {"stats",
               {{"env_steps", tree.stats.env_steps},
                {"wasted_iterations", tree.stats.wasted_iterations},
                {"goal_draws", tree.stats.goal_draws},
                {"iterations", tree.stats.iterations},
                {"first_success_iter", tree.stats.first_success_iter}}}};
  out << header.dump() << "\n";
  for (const TreeNode& n : tree.nodes) {
    json j{{"id", n.id},
           {"state", vec_to_json(n.state)},
           {"parent", n.parent},
           {"reward_in", n.reward_in},
           {"depth", n.depth},
           {"disc_return", n.disc_return},
           {"undisc_return", n.undisc_return},
           {"in_goal", n.in_goal}};
    if (n.parent >= 0) j["action_in"] = vec_to_json(n.action_in);
    out << j.dump() << "\n";
  }
  return out.str();
}

Tree parse_tree(const std::string& text) {
  std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) load_fail("header", "empty file");
  json h = parse_header(lines[0], kTreeSchema);

  std::string env_name = h.at("env").get<std::string>();
  auto env = make_env(env_name);
  PlannerConfig config = config_from_json(require(h, "config"));
  const bool augmented = config.return_weight > 0.0;
  const EnvSpec& spec = env->spec();
  const double horizon =
      config.max_depth > 0 ? config.max_depth : spec.horizon;

  Tree tree{env_name,
            require(h, "seed").get<std::uint64_t>(),
            config,
            {},
            KdTree(embedded_dim(spec) + (augmented ? 1 : 0)),
            {}};
  json stats = require(h, "stats");
  tree.stats.env_steps = require(stats, "env_steps").get<long>();
  tree.stats.wasted_iterations = require(stats, "wasted_iterations").get<long>();
  tree.stats.goal_draws = require(stats, "goal_draws").get<long>();
  tree.stats.iterations = require(stats, "iterations").get<long>();
  tree.stats.first_success_iter = require(stats, "first_success_iter").get<long>();

  size_t count = require(h, "count").get<size_t>();
  if (count != lines.size() - 1) load_fail("count", "node count mismatch");
  for (size_t i = 1; i < lines.size(); ++i) {
    json j = json::parse(lines[i], nullptr, false);
    if (j.is_discarded()) load_fail("node", "not valid JSON");
    TreeNode n;
    n.id = require(j, "id").get<int>();
    if (n.id != static_cast<int>(i) - 1) load_fail("id", "ids must be dense");
    n.state = vec_from_json(require(j, "state"), "state");
    n.parent = require(j, "parent").get<int>();
    if (n.parent >= n.id) load_fail("parent", "must precede the node");
    if (n.parent >= 0) {
      n.action_in = vec_from_json(require(j, "action_in"), "action_in");
    }
    n.reward_in = require(j, "reward_in").get<double>();
    n.depth = require(j, "depth").get<int>();
    n.disc_return = require(j, "disc_return").get<double>();
    n.undisc_return = require(j, "undisc_return").get<double>();
    n.in_goal = require(j, "in_goal").get<bool>();
    // Re-inserting in id order rebuilds the identical index structure.
    tree.index.insert(
        tree_embed(spec, config, n.state, n.disc_return / horizon));
    tree.nodes.push_back(std::move(n));
  }
  return tree;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void save_demos(const DemoSet& set, const std::string& path) {
  write_text_file(path, serialize_demos(set));
}

DemoSet load_demos(const std::string& path) {
  return parse_demos(read_text_file(path));
}

void save_tree(const Tree& tree, const std::string& path) {
  write_text_file(path, serialize_tree(tree));
}

Tree load_tree(const std::string& path) {
  return parse_tree(read_text_file(path));
}

std::string demos_csv(const DemoSet& set) {
  std::ostringstream out;
  int sdim = 0, adim = 0;
  if (!set.trajectories.empty() && !set.trajectories[0].states.empty()) {
    sdim = static_cast<int>(set.trajectories[0].states[0].size());
    if (!set.trajectories[0].actions.empty()) {
      adim = static_cast<int>(set.trajectories[0].actions[0].size());
    }
  } else if (!set.env_name.empty()) {
    auto env = make_env(set.env_name);
    sdim = env->spec().state_dim;
    adim = env->spec().action_dim;
  }
  out << "traj,t";
  for (int i = 0; i < sdim; ++i) out << ",s" << i;
  for (int i = 0; i < adim; ++i) out << ",a" << i;
  out << ",reward\n";
  for (size_t ti = 0; ti < set.trajectories.size(); ++ti) {
    const Trajectory& t = set.trajectories[ti];
    for (size_t step = 0; step < t.states.size(); ++step) {
      out << ti << "," << step;
      for (int i = 0; i < sdim; ++i) out << "," << format_double(t.states[step][i]);
      if (step < t.actions.size()) {
        for (int i = 0; i < adim; ++i) {
          out << "," << format_double(t.actions[step][i]);
        }
        out << "," << format_double(t.rewards[step]);
      } else {
        for (int i = 0; i < adim; ++i) out << ",";
        out << ",";
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace p2d2
