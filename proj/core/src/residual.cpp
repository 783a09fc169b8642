#include "rqlab/residual.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "fixed_point.hpp"
#include "rqlab/numerics.hpp"
#include "rqlab/soft_oracle.hpp"

namespace rqlab {

void CustomizationParams::validate() const {
  if (!(omega_prime >= 0.0)) throw std::invalid_argument("omega_prime must be >= 0");
  if (!(alpha_hat > 0.0)) throw std::invalid_argument("alpha_hat must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
}

void TdLearnerParams::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (episodes < 1 || steps_per_episode < 1) throw std::invalid_argument("episode budget must be positive");
  if (replay_capacity < 1 || batch_size < 1) throw std::invalid_argument("replay sizes must be positive");
  if (batch_size > replay_capacity) throw std::invalid_argument("batch_size must not exceed replay_capacity");
  if (target_sync_interval < 1) throw std::invalid_argument("target_sync_interval must be positive");
  if (!(exploration_epsilon >= 0.0 && exploration_epsilon <= 1.0)) {
    throw std::invalid_argument("exploration_epsilon must lie in [0, 1]");
  }
}

namespace {

void check_prior(const DiscreteMdp& mdp, const PolicyTable& prior) {
  if (prior.n_states() != mdp.n_states() || prior.n_actions() != mdp.n_actions()) {
    throw std::invalid_argument("prior policy shape does not match the MDP");
  }
  for (double p : prior.probs().values()) {
    if (!(p > 0.0)) throw std::invalid_argument("prior policy must be strictly positive");
  }
}

}  // namespace

double residual_soft_value(std::span<const double> q_r, std::span<const double> log_prior,
                           double omega_prime, double alpha_hat) {
  // Small fixed buffer: action sets here are tiny, and this sits in every inner loop.
  constexpr std::size_t kInline = 16;
  double inline_buf[kInline];
  std::vector<double> heap;
  std::span<double> logits;
  if (q_r.size() <= kInline) {
    logits = std::span<double>(inline_buf, q_r.size());
  } else {
    heap.resize(q_r.size());
    logits = heap;
  }
  for (std::size_t a = 0; a < q_r.size(); ++a) logits[a] = q_r[a] + omega_prime * log_prior[a];
  return soft_maximum(logits, alpha_hat);
}

ResidualQTable residual_soft_q_iteration(const DiscreteMdp& mdp, const PolicyTable& prior,
                                         const CustomizationParams& params) {
  params.validate();
  check_prior(mdp, prior);
  const double gamma = mdp.discount();
  std::vector<double> value(mdp.n_states());
  auto solved = detail::iterate_to_fixed_point(
      mdp.addon_rewards(), gamma, params.tol, params.max_iter, "residual soft Q-iteration",
      [&](const ActionTable& q_r, ActionTable& next) {
        for (StateId s = 0; s < mdp.n_states(); ++s) {
          value[s] = residual_soft_value(q_r.row(s), prior.log_row(s), params.omega_prime, params.alpha_hat);
        }
        for (StateId s = 0; s < mdp.n_states(); ++s) {
          for (ActionId a = 0; a < mdp.n_actions(); ++a) {
            next(s, a) = mdp.addon_reward(s, a) + gamma * expected_next(mdp, s, a, value);
          }
        }
      });
  return {std::move(solved.q)};
}

ActionTable residual_logits(const ResidualQTable& q_r, const PolicyTable& prior, double omega_prime) {
  if (!q_r.values.same_shape(prior.probs())) throw std::invalid_argument("residual table and prior differ in shape");
  ActionTable logits(q_r.values.n_states(), q_r.values.n_actions());
  for (StateId s = 0; s < logits.n_states(); ++s) {
    for (ActionId a = 0; a < logits.n_actions(); ++a) {
      logits(s, a) = q_r.values(s, a) + omega_prime * prior.log_prob(s, a);
    }
  }
  return logits;
}

PolicyTable residual_policy(const ResidualQTable& q_r, const PolicyTable& prior,
                            const CustomizationParams& params) {
  params.validate();
  return PolicyTable::from_logits(residual_logits(q_r, prior, params.omega_prime), params.alpha_hat,
                                  params.alpha_hat);
}

double residual_td_target(double addon_reward, StateId next_state, bool next_terminal, double gamma,
                          const ResidualQTable& target, const PolicyTable& prior,
                          const CustomizationParams& params) {
  if (next_terminal) return addon_reward;
  return addon_reward + gamma * residual_soft_value(target.values.row(next_state), prior.log_row(next_state),
                                                    params.omega_prime, params.alpha_hat);
}

ResidualQTable residual_policy_evaluation(const DiscreteMdp& mdp, const PolicyTable& prior,
                                          const PolicyTable& policy, const CustomizationParams& params) {
  params.validate();
  check_prior(mdp, prior);
  if (!policy.probs().same_shape(prior.probs())) throw std::invalid_argument("policy shape mismatch");
  const double gamma = mdp.discount();
  // The prior term and the entropy term do not depend on Q_R; fold them into
  // one per-state constant.
  std::vector<double> bonus(mdp.n_states(), 0.0);
  for (StateId s = 0; s < mdp.n_states(); ++s) {
    for (ActionId a = 0; a < mdp.n_actions(); ++a) {
      bonus[s] += policy.prob(s, a) *
                  (params.omega_prime * prior.log_prob(s, a) - params.alpha_hat * policy.log_prob(s, a));
    }
  }
  std::vector<double> value(mdp.n_states());
  auto solved = detail::iterate_to_fixed_point(
      mdp.addon_rewards(), gamma, params.tol, params.max_iter, "residual policy evaluation",
      [&](const ActionTable& q_r, ActionTable& next) {
        for (StateId s = 0; s < mdp.n_states(); ++s) {
          double v = bonus[s];
          for (ActionId a = 0; a < mdp.n_actions(); ++a) v += policy.prob(s, a) * q_r(s, a);
          value[s] = v;
        }
        for (StateId s = 0; s < mdp.n_states(); ++s) {
          for (ActionId a = 0; a < mdp.n_actions(); ++a) {
            next(s, a) = mdp.addon_reward(s, a) + gamma * expected_next(mdp, s, a, value);
          }
        }
      });
  return {std::move(solved.q)};
}

PolicyIterationResult residual_soft_policy_iteration(const DiscreteMdp& mdp, const PolicyTable& prior,
                                                     const CustomizationParams& params,
                                                     const std::function<void(const PolicyTable&)>& on_policy) {
  params.validate();
  check_prior(mdp, prior);
  PolicyTable policy = prior;
  if (on_policy) on_policy(policy);
  double last_change = std::numeric_limits<double>::infinity();
  for (int step = 1; step <= params.max_iter; ++step) {
    ResidualQTable q_r = residual_policy_evaluation(mdp, prior, policy, params);
    PolicyTable improved = residual_policy(q_r, prior, params);
    last_change = sup_norm_diff(improved.probs(), policy.probs());
    policy = std::move(improved);
    if (on_policy) on_policy(policy);
    if (last_change <= params.tol) {
      // Re-evaluate so the returned Q_R belongs to the returned policy.
      return {residual_policy_evaluation(mdp, prior, policy, params), std::move(policy), step};
    }
  }
  throw ConvergenceError("residual soft policy iteration did not converge", last_change, params.max_iter);
}

namespace {

struct StoredTransition {
  StateId state;
  ActionId action;
  double addon_reward;
  StateId next;
  bool next_terminal;
};

/// Fixed-capacity ring buffer of transitions with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) { data_.reserve(capacity); }

  void push(const StoredTransition& t) {
    if (data_.size() < capacity_) {
      data_.push_back(t);
    } else {
      data_[head_] = t;
      head_ = (head_ + 1) % capacity_;
    }
  }
  std::size_t size() const { return data_.size(); }
  const StoredTransition& sample(Rng& rng) const { return data_[uniform_index(data_.size(), rng)]; }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<StoredTransition> data_;
};

}  // namespace

TdLearningResult residual_soft_q_learning(Environment& env, const PolicyTable& prior,
                                          const CustomizationParams& cparams,
                                          const TdLearnerParams& lparams, Rng& rng,
                                          const ResidualQTable* exact) {
  cparams.validate();
  lparams.validate();
  const DiscreteMdp& mdp = env.mdp();
  check_prior(mdp, prior);
  const double gamma = mdp.discount();
  const std::size_t n_actions = mdp.n_actions();

  TdLearningResult result;
  result.q_r.values = ActionTable(mdp.n_states(), n_actions, 0.0);
  // The target table only changes at sync points, so its soft state values
  // are cached there instead of being recomputed for every sampled transition.
  std::vector<double> target_value(mdp.n_states());
  const auto sync_target = [&] {
    for (StateId s = 0; s < mdp.n_states(); ++s) {
      target_value[s] = mdp.is_terminal(s) ? 0.0
                                           : residual_soft_value(result.q_r.values.row(s), prior.log_row(s),
                                                                 cparams.omega_prime, cparams.alpha_hat);
    }
  };
  sync_target();
  ReplayBuffer replay(lparams.replay_capacity);

  std::vector<double> logits(n_actions);
  std::vector<double> behavior(n_actions);
  const double uniform_mass = lparams.exploration_epsilon / static_cast<double>(n_actions);

  std::vector<StateId> start_states;
  if (lparams.exploring_starts) {
    for (StateId s = 0; s < mdp.n_states(); ++s) {
      if (!mdp.is_terminal(s)) start_states.push_back(s);
    }
    if (start_states.empty()) throw std::invalid_argument("exploring starts need a non-terminal state");
  }

  for (int episode = 0; episode < lparams.episodes; ++episode) {
    StateId s = lparams.exploring_starts ? env.reset_to(start_states[uniform_index(start_states.size(), rng)])
                                         : env.reset(rng);
    double addon_return = 0.0;
    double basic_return = 0.0;
    for (int t = 0; t < lparams.steps_per_episode && !env.done(); ++t) {
      for (ActionId a = 0; a < n_actions; ++a) {
        logits[a] = result.q_r.values(s, a) + cparams.omega_prime * prior.log_prob(s, a);
      }
      softmax(logits, cparams.alpha_hat, behavior);
      for (auto& p : behavior) p = (1.0 - lparams.exploration_epsilon) * p + uniform_mass;
      const ActionId a = sample_index(behavior, rng);

      const StepResult step = env.step(a, rng);
      addon_return += step.addon_reward;
      basic_return += step.basic_reward;
      replay.push({s, a, step.addon_reward, step.state, mdp.is_terminal(step.state)});
      ++result.env_steps;

      if (replay.size() >= lparams.batch_size) {
        for (std::size_t b = 0; b < lparams.batch_size; ++b) {
          const StoredTransition& tr = replay.sample(rng);
          const double lr = lparams.lr_decay_updates > 0.0
                                ? lparams.learning_rate /
                                      (1.0 + static_cast<double>(result.updates) / lparams.lr_decay_updates)
                                : lparams.learning_rate;
          const double y = tr.next_terminal ? tr.addon_reward : tr.addon_reward + gamma * target_value[tr.next];
          double& q = result.q_r.values(tr.state, tr.action);
          q = (1.0 - lr) * q + lr * y;
          ++result.updates;
        }
      }
      if (result.env_steps % static_cast<std::size_t>(lparams.target_sync_interval) == 0) {
        sync_target();
      }
      s = step.state;
    }
    LearningCurvePoint point{episode, addon_return, basic_return, std::nullopt};
    if (exact != nullptr) point.sup_norm_gap = sup_norm_diff(result.q_r.values, exact->values);
    result.curve.push_back(point);
  }
  return result;
}

std::string learning_curve_csv(const std::vector<LearningCurvePoint>& curve) {
  std::ostringstream out;
  out << "episode_index,addon_return,basic_return,sup_norm_gap_to_exact\n";
  char buf[64];
  for (const auto& p : curve) {
    out << p.episode;
    std::snprintf(buf, sizeof buf, ",%.6g,%.6g,", p.addon_return, p.basic_return);
    out << buf;
    if (p.sup_norm_gap) {
      std::snprintf(buf, sizeof buf, "%.6g", *p.sup_norm_gap);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace rqlab
