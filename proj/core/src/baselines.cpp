#include "rqlab/baselines.hpp"

#include <limits>
#include <stdexcept>

namespace rqlab {

void GreedyParams::validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(alpha_hat > 0.0)) throw std::invalid_argument("alpha_hat must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
}

void KlRewardParams::validate() const {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
  if (outer_iters < 1) throw std::invalid_argument("outer_iters must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  inner.validate();
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

GreedyResult greedy_customization(const DiscreteMdp& mdp, const PolicyTable& prior, const GreedyParams& params) {
  params.validate();
  check_prior(mdp, prior);
  const SoftSolverParams eval{params.alpha_hat, params.tol, params.max_iter};
  const ActionTable& addon = mdp.addon_rewards();
  PolicyTable policy = prior;
  double last_change = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= params.max_iter; ++it) {
    QTable q = evaluate_soft_policy(mdp, addon, policy, eval).q;
    ActionTable logits(q.n_states(), q.n_actions());
    for (StateId s = 0; s < q.n_states(); ++s) {
      for (ActionId a = 0; a < q.n_actions(); ++a) {
        logits(s, a) = q(s, a) + params.lambda * prior.log_prob(s, a);
      }
    }
    PolicyTable next = PolicyTable::from_logits(logits, params.alpha_hat + params.lambda, params.alpha_hat);
    last_change = sup_norm_diff(next.probs(), policy.probs());
    policy = std::move(next);
    if (last_change <= params.tol) {
      return {evaluate_soft_policy(mdp, addon, policy, eval).q, std::move(policy), it};
    }
  }
  throw ConvergenceError("greedy customization did not converge", last_change, params.max_iter);
}

KlRewardResult kl_augmented_rl(const DiscreteMdp& mdp, const PolicyTable& prior, const KlRewardParams& params) {
  params.validate();
  check_prior(mdp, prior);
  KlRewardResult result{prior, false, 0, std::numeric_limits<double>::infinity()};
  ActionTable reward(mdp.n_states(), mdp.n_actions());
  for (int t = 1; t <= params.outer_iters; ++t) {
    const PolicyTable& current = result.policy;
    for (StateId s = 0; s < mdp.n_states(); ++s) {
      for (ActionId a = 0; a < mdp.n_actions(); ++a) {
        reward(s, a) = mdp.addon_reward(s, a) - params.beta * (current.log_prob(s, a) - prior.log_prob(s, a));
      }
    }
    const PolicyTable solved = boltzmann_policy(solve_soft_values(mdp, reward, params.inner).q, params.inner.alpha);
    ActionTable mixed(mdp.n_states(), mdp.n_actions());
    for (StateId s = 0; s < mdp.n_states(); ++s) {
      double total = 0.0;
      for (ActionId a = 0; a < mdp.n_actions(); ++a) {
        mixed(s, a) = (1.0 - params.damping) * current.prob(s, a) + params.damping * solved.prob(s, a);
        total += mixed(s, a);
      }
      for (ActionId a = 0; a < mdp.n_actions(); ++a) mixed(s, a) /= total;
    }
    result.last_gap = sup_norm_diff(mixed, current.probs());
    result.policy = PolicyTable::from_probabilities(std::move(mixed), params.inner.alpha);
    result.outer_iterations = t;
    if (result.last_gap <= params.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

LikelihoodResult likelihood_augmented_rl(const DiscreteMdp& mdp, const PolicyTable& prior,
                                         const CustomizationParams& params) {
  params.validate();
  check_prior(mdp, prior);
  ActionTable reward(mdp.n_states(), mdp.n_actions());
  for (StateId s = 0; s < mdp.n_states(); ++s) {
    for (ActionId a = 0; a < mdp.n_actions(); ++a) {
      reward(s, a) = mdp.addon_reward(s, a) + params.omega_prime * prior.log_prob(s, a);
    }
  }
  const SoftSolverParams solver{params.alpha_hat, params.tol, params.max_iter};
  QTable q = solve_soft_values(mdp, reward, solver).q;
  PolicyTable policy = boltzmann_policy(q, params.alpha_hat);
  return {std::move(q), std::move(policy)};
}

}  // namespace rqlab
