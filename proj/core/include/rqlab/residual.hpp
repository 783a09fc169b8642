#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rqlab/environment.hpp"
#include "rqlab/mdp.hpp"
#include "rqlab/rng.hpp"
#include "rqlab/table.hpp"

namespace rqlab {

/// Hyperparameters of residual customization.
///
/// `omega_prime` is the reward weight times the prior's temperature. The
/// prior's own temperature never enters any computation; the discount is
/// always taken from the model or environment.
struct CustomizationParams {
  double omega_prime = 1.0;
  double alpha_hat = 1.0;
  double tol = 1e-8;
  int max_iter = 100000;

  void validate() const;
};

/// Residual soft values Q_R = Q_hat - omega * Q*, where Q_hat solves the
/// combined task and Q* is the prior's (unknown) soft Q-function.
struct ResidualQTable {
  QTable values;
};

/// alpha_hat * ln sum_a exp((q_r(a) + omega' ln prior(a)) / alpha_hat).
double residual_soft_value(std::span<const double> q_r, std::span<const double> log_prior,
                           double omega_prime, double alpha_hat);

/// Exact residual soft Q-iteration:
///   Q_R(s,a) = r_R(s,a) + gamma E_s'[ residual_soft_value(Q_R(s',.), ln prior(.|s')) ].
/// Needs neither the basic reward nor the prior's value function.
ResidualQTable residual_soft_q_iteration(const DiscreteMdp& mdp, const PolicyTable& prior,
                                         const CustomizationParams& params);

/// pi_hat(a|s) proportional to exp((Q_R(s,a) + omega' ln prior(a|s)) / alpha_hat).
PolicyTable residual_policy(const ResidualQTable& q_r, const PolicyTable& prior,
                            const CustomizationParams& params);

/// Per-state logits Q_R + omega' ln prior, i.e. the customized soft Q up to a
/// per-state constant.
ActionTable residual_logits(const ResidualQTable& q_r, const PolicyTable& prior, double omega_prime);

/// Sample target of residual soft Q-learning for one stored transition:
///   r_R + gamma * residual_soft_value(target(s',.), ln prior(.|s')),
/// with the bootstrap dropped when s' is terminal.
double residual_td_target(double addon_reward, StateId next_state, bool next_terminal, double gamma,
                          const ResidualQTable& target, const PolicyTable& prior,
                          const CustomizationParams& params);

/// Fixed-policy residual evaluation:
///   Q_R(s,a) = r_R + gamma E_s' E_a'~pi_hat[ Q_R(s',a') + omega' ln prior(a'|s') - alpha_hat ln pi_hat(a'|s') ].
ResidualQTable residual_policy_evaluation(const DiscreteMdp& mdp, const PolicyTable& prior,
                                          const PolicyTable& policy, const CustomizationParams& params);

struct PolicyIterationResult {
  ResidualQTable q_r;
  PolicyTable policy;
  int improvement_steps = 0;
};

/// Tabular residual soft policy iteration. Alternates exact residual policy
/// evaluation with the closed-form improvement step until the policy moves
/// by <= params.tol in sup-norm. `on_policy` sees every policy, starting with
/// the initial one (the prior).
PolicyIterationResult residual_soft_policy_iteration(
    const DiscreteMdp& mdp, const PolicyTable& prior, const CustomizationParams& params,
    const std::function<void(const PolicyTable&)>& on_policy = {});

/// Sample-based learner settings. Defaults are tuned for desk-scale models.
struct TdLearnerParams {
  /// lr_t = learning_rate / (1 + t / lr_decay_updates), t = updates applied.
  /// lr_decay_updates <= 0 keeps the rate constant.
  double learning_rate = 0.5;
  double lr_decay_updates = 10000.0;
  int episodes = 800000;
  int steps_per_episode = 30;
  std::size_t replay_capacity = 20000;
  std::size_t batch_size = 8;
  int target_sync_interval = 500;
  /// Behavior = (1 - eps) * current residual policy + eps * uniform.
  /// The default is fully uniform: near-zero prior actions next to a
  /// terminal cliff are otherwise sampled too rarely for the sup-norm to
  /// settle.
  double exploration_epsilon = 1.0;
  /// Start each episode in a uniformly drawn non-terminal state instead of
  /// the environment's initial distribution.
  bool exploring_starts = true;

  void validate() const;
};

struct LearningCurvePoint {
  int episode;
  double addon_return;
  double basic_return;
  std::optional<double> sup_norm_gap;
};

struct TdLearningResult {
  ResidualQTable q_r;
  std::vector<LearningCurvePoint> curve;
  std::size_t env_steps = 0;
  std::size_t updates = 0;
};

/// Residual soft Q-learning with a replay buffer and a hard-synced target
/// table. When `exact` is given the curve records the sup-norm gap to it.
TdLearningResult residual_soft_q_learning(Environment& env, const PolicyTable& prior,
                                          const CustomizationParams& cparams,
                                          const TdLearnerParams& lparams, Rng& rng,
                                          const ResidualQTable* exact = nullptr);

/// CSV with header episode_index,addon_return,basic_return,sup_norm_gap_to_exact.
/// The gap column is empty when no reference was supplied.
std::string learning_curve_csv(const std::vector<LearningCurvePoint>& curve);

}  // namespace rqlab
