#include "rqlab/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rqlab/numerics.hpp"
#include "rqlab/serialization.hpp"
#include "rqlab/soft_oracle.hpp"

namespace rqlab {

using nlohmann::json;

namespace {

// --- config parsing --------------------------------------------------------

void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const char* where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + "." + key + ": wrong type");
  }
}

template <class T>
void read_optional(const json& obj, const char* key, std::optional<T>& out, const char* where) {
  if (!obj.contains(key)) return;
  T value{};
  read(obj, key, value, where);
  out = value;
}

EnvSpec parse_env(const json& obj) {
  check_keys(obj, "env",
             {"name", "half_width", "lean_limit", "position_bins", "velocity_bins", "lanes", "cells",
              "grid_width", "grid_height", "episode_cap", "discount", "random_start", "basic_scale",
              "addon_scale"});
  EnvSpec spec;
  if (!obj.contains("name")) throw ConfigError("env.name is required");
  read(obj, "name", spec.name, "env");
  read(obj, "half_width", spec.half_width, "env");
  read(obj, "lean_limit", spec.lean_limit, "env");
  read(obj, "position_bins", spec.position_bins, "env");
  read(obj, "velocity_bins", spec.velocity_bins, "env");
  read(obj, "lanes", spec.lanes, "env");
  read(obj, "cells", spec.cells, "env");
  read(obj, "grid_width", spec.grid_width, "env");
  read(obj, "grid_height", spec.grid_height, "env");
  read_optional(obj, "episode_cap", spec.episode_cap, "env");
  read_optional(obj, "discount", spec.discount, "env");
  read(obj, "random_start", spec.random_start, "env");
  read_optional(obj, "basic_scale", spec.basic_scale, "env");
  read_optional(obj, "addon_scale", spec.addon_scale, "env");
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("env: ") + e.what());
  }
  return spec;
}

PriorSpec parse_prior(const json& obj) {
  check_keys(obj, "prior", {"kind", "alpha", "noise_scale", "seed", "path"});
  PriorSpec spec;
  std::string kind = "oracle";
  read(obj, "kind", kind, "prior");
  if (kind == "oracle") {
    spec.kind = PriorSpec::Kind::oracle;
  } else if (kind == "perturbed") {
    spec.kind = PriorSpec::Kind::perturbed;
  } else if (kind == "file") {
    spec.kind = PriorSpec::Kind::file;
  } else {
    throw ConfigError("prior.kind: unknown kind '" + kind + "'");
  }
  read(obj, "alpha", spec.alpha, "prior");
  read(obj, "noise_scale", spec.noise_scale, "prior");
  read(obj, "seed", spec.seed, "prior");
  read(obj, "path", spec.path, "prior");
  if (!(spec.alpha > 0.0)) throw ConfigError("prior.alpha must be positive");
  if (!(spec.noise_scale >= 0.0)) throw ConfigError("prior.noise_scale must be >= 0");
  if (spec.kind == PriorSpec::Kind::file && spec.path.empty()) throw ConfigError("prior.path is required");
  return spec;
}

MethodSpec parse_method(const json& entry) {
  MethodSpec m;
  const json obj = entry.is_string() ? json{{"kind", entry}} : entry;
  if (!obj.is_object() || !obj.contains("kind")) throw ConfigError("methods: each entry needs a kind");
  std::string kind;
  read(obj, "kind", kind, "methods");
  const char* where = "methods";
  if (kind == "rql-exact" || kind == "rql-spi" || kind == "likelihood-aug") {
    check_keys(obj, where, {"kind"});
    m.kind = kind == "rql-exact"  ? MethodSpec::Kind::rql_exact
             : kind == "rql-spi" ? MethodSpec::Kind::rql_spi
                                 : MethodSpec::Kind::likelihood_aug;
  } else if (kind == "rql-td") {
    check_keys(obj, where,
               {"kind", "learning_rate", "lr_decay_updates", "episodes", "steps_per_episode",
                "replay_capacity", "batch_size", "target_sync_interval", "exploration_epsilon", "exploring_starts"});
    m.kind = MethodSpec::Kind::rql_td;
    read(obj, "learning_rate", m.td.learning_rate, where);
    read(obj, "lr_decay_updates", m.td.lr_decay_updates, where);
    read(obj, "episodes", m.td.episodes, where);
    read(obj, "steps_per_episode", m.td.steps_per_episode, where);
    read(obj, "replay_capacity", m.td.replay_capacity, where);
    read(obj, "batch_size", m.td.batch_size, where);
    read(obj, "target_sync_interval", m.td.target_sync_interval, where);
    read(obj, "exploration_epsilon", m.td.exploration_epsilon, where);
    read(obj, "exploring_starts", m.td.exploring_starts, where);
  } else if (kind == "mcts") {
    check_keys(obj, where, {"kind", "iter_max", "horizon", "epsilon", "rollouts"});
    m.kind = MethodSpec::Kind::mcts;
    read(obj, "iter_max", m.mcts.iter_max, where);
    read(obj, "horizon", m.mcts.horizon, where);
    read(obj, "epsilon", m.mcts.epsilon, where);
    read(obj, "rollouts", m.mcts.rollouts, where);
  } else if (kind == "greedy") {
    check_keys(obj, where, {"kind", "lambda"});
    m.kind = MethodSpec::Kind::greedy;
    read(obj, "lambda", m.weight, where);
  } else if (kind == "kl-reward") {
    check_keys(obj, where, {"kind", "beta", "damping", "outer_iters"});
    m.kind = MethodSpec::Kind::kl_reward;
    read(obj, "beta", m.weight, where);
    read(obj, "damping", m.kl_damping, where);
    read(obj, "outer_iters", m.kl_outer_iters, where);
  } else if (kind == "rl-full") {
    check_keys(obj, where, {"kind", "omega"});
    m.kind = MethodSpec::Kind::rl_full;
    read(obj, "omega", m.weight, where);
  } else {
    throw ConfigError("methods: unknown method '" + kind + "'");
  }
  if (!(m.weight >= 0.0)) throw ConfigError("methods: " + kind + " weight must be >= 0");
  try {
    if (m.kind == MethodSpec::Kind::rql_td) m.td.validate();
    if (m.kind == MethodSpec::Kind::mcts) m.mcts.validate();
    if (m.kind == MethodSpec::Kind::kl_reward) {
      KlRewardParams kl;
      kl.damping = m.kl_damping;
      kl.outer_iters = m.kl_outer_iters;
      kl.validate();
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("methods: " + kind + ": " + e.what());
  }
  return m;
}

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", w);
  return buf;
}

}  // namespace

std::string MethodSpec::label() const {
  switch (kind) {
    case Kind::rql_exact:
      return "rql-exact";
    case Kind::rql_td:
      return "rql-td";
    case Kind::rql_spi:
      return "rql-spi";
    case Kind::mcts:
      return "mcts";
    case Kind::greedy:
      return "greedy(lambda=" + format_weight(weight) + ")";
    case Kind::kl_reward:
      return "kl-reward(beta=" + format_weight(weight) + ")";
    case Kind::likelihood_aug:
      return "likelihood-aug";
    case Kind::rl_full:
      return "rl-full(omega=" + format_weight(weight) + ")";
  }
  return "unknown";
}

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(doc, "config", {"env", "prior", "methods", "customization", "evaluation", "output"});
  ExperimentConfig config;
  if (!doc.contains("env")) throw ConfigError("config.env is required");
  config.env = parse_env(doc.at("env"));
  if (doc.contains("prior")) config.prior = parse_prior(doc.at("prior"));

  if (!doc.contains("methods") || !doc.at("methods").is_array() || doc.at("methods").empty()) {
    throw ConfigError("config.methods must be a non-empty array");
  }
  for (const auto& entry : doc.at("methods")) config.methods.push_back(parse_method(entry));

  if (doc.contains("customization")) {
    const auto& c = doc.at("customization");
    check_keys(c, "customization", {"omega_prime", "alpha_hat", "tol", "max_iter"});
    read(c, "omega_prime", config.customization.omega_prime, "customization");
    read(c, "alpha_hat", config.customization.alpha_hat, "customization");
    read(c, "tol", config.customization.tol, "customization");
    read(c, "max_iter", config.customization.max_iter, "customization");
    try {
      config.customization.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("customization: ") + e.what());
    }
  }
  if (doc.contains("evaluation")) {
    const auto& e = doc.at("evaluation");
    check_keys(e, "evaluation", {"episodes", "seeds"});
    read(e, "episodes", config.evaluation.episodes, "evaluation");
    read(e, "seeds", config.evaluation.seeds, "evaluation");
    if (config.evaluation.episodes < 1) throw ConfigError("evaluation.episodes must be >= 1");
    if (config.evaluation.seeds.empty()) throw ConfigError("evaluation.seeds must not be empty");
  }
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    check_keys(o, "output", {"directory", "formats"});
    read(o, "directory", config.output.directory, "output");
    if (o.contains("formats")) {
      std::vector<std::string> formats;
      read(o, "formats", formats, "output");
      config.output.csv = false;
      config.output.json = false;
      for (const auto& f : formats) {
        if (f == "csv") {
          config.output.csv = true;
        } else if (f == "json") {
          config.output.json = true;
        } else {
          throw ConfigError("output.formats: unknown format '" + f + "'");
        }
      }
    }
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

PolicyTable build_prior(const PriorSpec& spec, const DiscreteMdp& mdp) {
  if (spec.kind == PriorSpec::Kind::file) {
    std::ifstream in(spec.path, std::ios::binary);
    if (!in) throw ConfigError("cannot read prior file " + spec.path);
    std::ostringstream text;
    text << in.rdbuf();
    LoadedPolicy loaded;
    try {
      loaded = policy_from_json(text.str());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("prior file rejected: ") + e.what());
    }
    if (loaded.policy.n_states() != mdp.n_states() || loaded.policy.n_actions() != mdp.n_actions()) {
      throw ConfigError("prior file shape does not match the environment");
    }
    if (loaded.floored_entries > 0) {
      std::clog << "warning: prior file had " << loaded.floored_entries << " entries floored to "
                << kMinProbability << '\n';
    }
    return loaded.policy;
  }
  const SoftSolverParams solver{spec.alpha};
  const QTable q = soft_value_iteration(mdp, RewardSelector::basic(), solver);
  PolicyTable oracle = boltzmann_policy(q, spec.alpha);
  if (spec.kind == PriorSpec::Kind::oracle || spec.noise_scale == 0.0) return oracle;

  Rng rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.noise_scale);
  ActionTable logits = oracle.log_probs();
  for (double& l : logits.values()) l += noise(rng);
  return PolicyTable::from_logits(logits, 1.0, spec.alpha);
}

Stat summarize(std::span<const double> values) {
  Stat stat;
  if (values.empty()) return stat;
  double sum = 0.0;
  for (double v : values) sum += v;
  stat.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return stat;
  double sq = 0.0;
  for (double v : values) sq += (v - stat.mean) * (v - stat.mean);
  stat.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  return stat;
}

const MetricsRecord* MetricsTable::find(std::string_view policy) const {
  for (const auto& row : rows) {
    if (row.policy == policy) return &row;
  }
  return nullptr;
}

void EpisodeSamples::append(const EpisodeSamples& other) {
  success.insert(success.end(), other.success.begin(), other.success.end());
  basic_return.insert(basic_return.end(), other.basic_return.begin(), other.basic_return.end());
  addon_return.insert(addon_return.end(), other.addon_return.begin(), other.addon_return.end());
  task_metric.insert(task_metric.end(), other.task_metric.begin(), other.task_metric.end());
}

MetricsRecord EpisodeSamples::summarize(std::string policy) const {
  MetricsRecord record;
  record.policy = std::move(policy);
  record.success_rate = rqlab::summarize(success).mean;
  record.basic_reward = rqlab::summarize(basic_return);
  record.addon_reward = rqlab::summarize(addon_return);
  record.task_metric = rqlab::summarize(task_metric);
  record.episodes = static_cast<int>(success.size());
  return record;
}

EpisodeSamples sample_episodes(Environment& env, const EnvSpec& spec, const PolicyTable& policy, int episodes,
                               Rng& rng) {
  if (policy.n_states() != env.mdp().n_states() || policy.n_actions() != env.mdp().n_actions()) {
    throw std::invalid_argument("policy shape does not match the environment");
  }
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  EpisodeSamples samples;
  for (int e = 0; e < episodes; ++e) {
    StateId s = env.reset(rng);
    while (!env.done()) s = env.step(sample_index(policy.row(s), rng), rng).state;
    const EpisodeTrace& trace = env.trace();
    samples.success.push_back(env.is_success(trace) ? 1.0 : 0.0);
    samples.basic_return.push_back(trace.basic_return());
    samples.addon_return.push_back(trace.addon_return());
    samples.task_metric.push_back(compute_task_metric(trace, spec).value);
  }
  return samples;
}

MetricsRecord evaluate_policy(Environment& env, const EnvSpec& spec, const PolicyTable& policy, int episodes,
                              Rng& rng, std::string label) {
  return sample_episodes(env, spec, policy, episodes, rng).summarize(std::move(label));
}

PolicyTable customize(const MethodSpec& method, const BuiltEnv& built, const PolicyTable& prior,
                      const CustomizationParams& params, std::uint64_t seed) {
  const DiscreteMdp& mdp = *built.mdp;
  switch (method.kind) {
    case MethodSpec::Kind::rql_exact:
      return residual_policy(residual_soft_q_iteration(mdp, prior, params), prior, params);
    case MethodSpec::Kind::rql_spi:
      return residual_soft_policy_iteration(mdp, prior, params).policy;
    case MethodSpec::Kind::rql_td: {
      Environment env = built.env;
      Rng rng(seed);
      const auto learned = residual_soft_q_learning(env, prior, params, method.td, rng);
      return residual_policy(learned.q_r, prior, params);
    }
    case MethodSpec::Kind::mcts: {
      // Tabulate the root tree policy (epsilon = 0) of one search per state.
      MctsParams mp = method.mcts;
      mp.omega_prime = params.omega_prime;
      mp.alpha_hat = params.alpha_hat;
      mp.mode = BackupMode::residual;
      ActionTable probs(mdp.n_states(), mdp.n_actions());
      for (StateId s = 0; s < mdp.n_states(); ++s) {
        if (mdp.is_terminal(s)) {
          for (ActionId a = 0; a < mdp.n_actions(); ++a) probs(s, a) = prior.prob(s, a);
          continue;
        }
        Rng rng(derive_seed(seed, s));
        const auto row = root_policy(plan(s, mdp, prior, mp, rng), prior, mp);
        for (ActionId a = 0; a < mdp.n_actions(); ++a) probs(s, a) = row[a];
      }
      return PolicyTable::from_probabilities(std::move(probs), params.alpha_hat);
    }
    case MethodSpec::Kind::greedy: {
      GreedyParams gp;
      gp.lambda = method.weight;
      gp.alpha_hat = params.alpha_hat;
      gp.tol = params.tol;
      gp.max_iter = params.max_iter;
      return greedy_customization(mdp, prior, gp).policy;
    }
    case MethodSpec::Kind::kl_reward: {
      KlRewardParams kp;
      kp.beta = method.weight;
      kp.damping = method.kl_damping;
      kp.outer_iters = method.kl_outer_iters;
      kp.tol = params.tol;
      kp.inner = SoftSolverParams{params.alpha_hat, params.tol, params.max_iter};
      auto result = kl_augmented_rl(mdp, prior, kp);
      if (!result.converged) {
        throw ConvergenceError("kl-reward outer loop did not converge (last gap " +
                                   std::to_string(result.last_gap) + ")",
                               result.last_gap, result.outer_iterations);
      }
      return result.policy;
    }
    case MethodSpec::Kind::likelihood_aug:
      return likelihood_augmented_rl(mdp, prior, params).policy;
    case MethodSpec::Kind::rl_full: {
      const SoftSolverParams solver{params.alpha_hat, params.tol, params.max_iter};
      return boltzmann_policy(soft_value_iteration(mdp, RewardSelector::combined(method.weight), solver),
                              params.alpha_hat);
    }
  }
  throw std::logic_error("unhandled method kind");
}

unsigned worker_threads() {
  if (const char* env = std::getenv("RQLAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr std::uint64_t kEvaluationSalt = 0x6576616c;  // shared by every row of a seed

struct Cell {
  std::size_t row;      // 0 = prior, i + 1 = methods[i]
  std::size_t seed_ix;
  EpisodeSamples samples;
  std::string error;
};

}  // namespace

MetricsTable run_experiment(const ExperimentConfig& config) {
  if (config.methods.empty()) throw ConfigError("at least one method is required");
  if (config.evaluation.episodes < 1) throw ConfigError("evaluation.episodes must be >= 1");
  const BuiltEnv built = make_env(config.env);
  const PolicyTable prior = build_prior(config.prior, *built.mdp);

  std::vector<Cell> cells;
  for (std::size_t row = 0; row <= config.methods.size(); ++row) {
    for (std::size_t k = 0; k < config.evaluation.seeds.size(); ++k) cells.push_back({row, k, {}, {}});
  }

  auto run_cell = [&](Cell& cell) {
    const std::uint64_t seed = config.evaluation.seeds[cell.seed_ix];
    try {
      PolicyTable policy = prior;
      if (cell.row > 0) {
        policy = customize(config.methods[cell.row - 1], built, prior, config.customization,
                           derive_seed(seed, cell.row));
      }
      Environment env = built.env;
      Rng rng(derive_seed(seed, kEvaluationSalt));
      cell.samples = sample_episodes(env, config.env, policy, config.evaluation.episodes, rng);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };

  const unsigned threads = std::min<unsigned>(worker_threads(), static_cast<unsigned>(cells.size()));
  if (threads <= 1) {
    for (auto& cell : cells) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(cells[i]);
      });
    }
    for (auto& th : pool) th.join();
  }

  MetricsTable table;
  table.env = config.env.name;
  table.task_metric = task_metric_info(config.env).name;
  const std::size_t n_seeds = config.evaluation.seeds.size();
  for (std::size_t row = 0; row <= config.methods.size(); ++row) {
    const std::string label = row == 0 ? "prior" : config.methods[row - 1].label();
    EpisodeSamples pooled;
    std::string error;
    for (std::size_t k = 0; k < n_seeds; ++k) {
      const Cell& cell = cells[row * n_seeds + k];
      if (!cell.error.empty()) {
        error = "seed " + std::to_string(config.evaluation.seeds[k]) + ": " + cell.error;
        break;
      }
      pooled.append(cell.samples);
    }
    if (!error.empty()) {
      table.failures.push_back({label, error});
      continue;
    }
    table.rows.push_back(pooled.summarize(label));
  }
  return table;
}

// --- reports ---------------------------------------------------------------

namespace {

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json stat_json(const Stat& s) { return {{"mean", s.mean}, {"std", s.std}}; }

Stat stat_from(const json& j) { return {j.at("mean").get<double>(), j.at("std").get<double>()}; }

}  // namespace

std::string report_csv(const MetricsTable& table) {
  std::string out =
      "policy,success_rate,basic_reward_mean,basic_reward_std,addon_reward_mean,addon_reward_std,"
      "task_metric_mean,task_metric_std,episodes\n";
  for (const auto& r : table.rows) {
    out += csv_field(r.policy);
    for (double v : {r.success_rate, r.basic_reward.mean, r.basic_reward.std, r.addon_reward.mean,
                     r.addon_reward.std, r.task_metric.mean, r.task_metric.std}) {
      out += ',';
      out += csv_number(v);
    }
    out += ',' + std::to_string(r.episodes) + '\n';
  }
  return out;
}

std::string report_json(const MetricsTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"policy", r.policy},
                    {"success_rate", r.success_rate},
                    {"basic_reward", stat_json(r.basic_reward)},
                    {"addon_reward", stat_json(r.addon_reward)},
                    {"task_metric", stat_json(r.task_metric)},
                    {"episodes", r.episodes}});
  }
  json failures = json::array();
  for (const auto& f : table.failures) failures.push_back({{"policy", f.policy}, {"message", f.message}});
  json doc{{"env", table.env}, {"task_metric", table.task_metric}, {"rows", rows}, {"failures", failures}};
  return doc.dump(2) + "\n";
}

MetricsTable report_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    MetricsTable table;
    table.env = doc.at("env").get<std::string>();
    table.task_metric = doc.at("task_metric").get<std::string>();
    for (const auto& r : doc.at("rows")) {
      MetricsRecord record;
      record.policy = r.at("policy").get<std::string>();
      record.success_rate = r.at("success_rate").get<double>();
      record.basic_reward = stat_from(r.at("basic_reward"));
      record.addon_reward = stat_from(r.at("addon_reward"));
      record.task_metric = stat_from(r.at("task_metric"));
      record.episodes = r.at("episodes").get<int>();
      table.rows.push_back(std::move(record));
    }
    if (doc.contains("failures")) {
      for (const auto& f : doc.at("failures")) {
        table.failures.push_back({f.at("policy").get<std::string>(), f.at("message").get<std::string>()});
      }
    }
    return table;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

void emit_report(const MetricsTable& table, const std::filesystem::path& directory, bool csv, bool json_out) {
  if (table.rows.empty() && table.failures.empty()) throw std::invalid_argument("emit_report: empty table");
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw ReportIoError("cannot create output directory " + directory.string() + ": " + ec.message());
  auto write = [&](const char* name, const std::string& body) {
    const auto path = directory / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ReportIoError("cannot write " + path.string());
    out << body;
    out.flush();
    if (!out) throw ReportIoError("failed writing " + path.string());
  };
  if (csv) write("report.csv", report_csv(table));
  if (json_out) write("report.json", report_json(table));
}

}  // namespace rqlab
