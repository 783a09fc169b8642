#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rqlab/baselines.hpp"
#include "rqlab/envs.hpp"
#include "rqlab/mcts.hpp"
#include "rqlab/residual.hpp"

namespace rqlab {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ReportIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PriorSpec {
  enum class Kind { oracle, perturbed, file };
  Kind kind = Kind::oracle;
  double alpha = 1.0;
  double noise_scale = 0.0;
  std::uint64_t seed = 0;
  std::string path;
};

struct MethodSpec {
  enum class Kind { rql_exact, rql_td, rql_spi, mcts, greedy, kl_reward, likelihood_aug, rl_full };
  Kind kind = Kind::rql_exact;
  /// lambda (greedy), beta (kl-reward) or omega (rl-full).
  double weight = 1.0;
  TdLearnerParams td{};
  MctsParams mcts{};
  double kl_damping = 0.5;
  int kl_outer_iters = 200;

  std::string label() const;
};

struct EvaluationSpec {
  int episodes = 4000;
  std::vector<std::uint64_t> seeds{0};
};

struct OutputSpec {
  std::string directory;
  bool csv = true;
  bool json = true;
};

struct ExperimentConfig {
  EnvSpec env;
  PriorSpec prior;
  std::vector<MethodSpec> methods;
  CustomizationParams customization;
  EvaluationSpec evaluation;
  OutputSpec output;
};

/// Parses the JSON config. Unknown keys, wrong types, and out-of-range
/// values throw ConfigError.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// oracle: Boltzmann policy of the basic-channel soft optimum at alpha.
/// perturbed: oracle logits plus Gaussian noise of scale noise_scale, seeded.
/// file: policy JSON, floored and validated against the model's shape.
PolicyTable build_prior(const PriorSpec& spec, const DiscreteMdp& mdp);

struct Stat {
  double mean = 0.0;
  double std = 0.0;
  friend bool operator==(const Stat&, const Stat&) = default;
};

/// Mean and sample standard deviation; std is 0 for fewer than two samples.
Stat summarize(std::span<const double> values);

struct MetricsRecord {
  std::string policy;
  double success_rate = 0.0;
  Stat basic_reward;
  Stat addon_reward;
  Stat task_metric;
  int episodes = 0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

struct MethodFailure {
  std::string policy;
  std::string message;

  friend bool operator==(const MethodFailure&, const MethodFailure&) = default;
};

struct MetricsTable {
  std::string env;
  std::string task_metric;
  std::vector<MetricsRecord> rows;
  std::vector<MethodFailure> failures;

  const MetricsRecord* find(std::string_view policy) const;
  friend bool operator==(const MetricsTable&, const MetricsTable&) = default;
};

/// Per-episode samples behind a MetricsRecord.
struct EpisodeSamples {
  std::vector<double> success;
  std::vector<double> basic_return;
  std::vector<double> addon_return;
  std::vector<double> task_metric;

  void append(const EpisodeSamples& other);
  MetricsRecord summarize(std::string policy) const;
};

/// Runs `episodes` episodes sampling actions from `policy`. Returns are
/// undiscounted episode sums of the table rewards.
EpisodeSamples sample_episodes(Environment& env, const EnvSpec& spec, const PolicyTable& policy,
                               int episodes, Rng& rng);
MetricsRecord evaluate_policy(Environment& env, const EnvSpec& spec, const PolicyTable& policy,
                              int episodes, Rng& rng, std::string label = {});

/// Builds the env and prior, customizes with every method, and evaluates the
/// prior plus each method's policy on every seed (pooled per row). Rows come
/// in config order after the prior. Method failures land in `failures`.
MetricsTable run_experiment(const ExperimentConfig& config);

/// Produces the customized policy of one method. Seed only matters for
/// sampling-based methods (rql-td, mcts).
PolicyTable customize(const MethodSpec& method, const BuiltEnv& built, const PolicyTable& prior,
                      const CustomizationParams& params, std::uint64_t seed);

std::string report_csv(const MetricsTable& table);
std::string report_json(const MetricsTable& table);
MetricsTable report_from_json(std::string_view text);

/// Writes report.csv and/or report.json into `directory` (created if
/// missing). Throws ReportIoError when the directory is not writable and
/// std::invalid_argument on an empty table.
void emit_report(const MetricsTable& table, const std::filesystem::path& directory, bool csv, bool json);

/// Reads RQLAB_THREADS; defaults to hardware concurrency, minimum 1.
unsigned worker_threads();

}  // namespace rqlab
