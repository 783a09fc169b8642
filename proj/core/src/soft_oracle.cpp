#include "rqlab/soft_oracle.hpp"

#include <stdexcept>

#include "fixed_point.hpp"
#include "rqlab/numerics.hpp"

namespace rqlab {

void SoftSolverParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
}

namespace {

void check_shapes(const DiscreteMdp& mdp, const ActionTable& table, const char* what) {
  if (table.n_states() != mdp.n_states() || table.n_actions() != mdp.n_actions()) {
    throw std::invalid_argument(std::string(what) + " shape does not match the MDP");
  }
}

void check_discount(const DiscreteMdp& mdp) {
  if (!(mdp.discount() >= 0.0 && mdp.discount() < 1.0)) {
    throw std::invalid_argument("soft solvers need a discount in [0, 1)");
  }
}

}  // namespace

SolveResult solve_soft_values(const DiscreteMdp& mdp, const ActionTable& reward,
                              const SoftSolverParams& params) {
  params.validate();
  check_discount(mdp);
  check_shapes(mdp, reward, "reward table");
  const double gamma = mdp.discount();
  std::vector<double> value(mdp.n_states());
  return detail::iterate_to_fixed_point(
      reward, gamma, params.tol, params.max_iter, "soft value iteration",
      [&](const ActionTable& q, ActionTable& next) {
        for (StateId s = 0; s < mdp.n_states(); ++s) value[s] = soft_maximum(q.row(s), params.alpha);
        for (StateId s = 0; s < mdp.n_states(); ++s) {
          for (ActionId a = 0; a < mdp.n_actions(); ++a) {
            next(s, a) = reward(s, a) + gamma * expected_next(mdp, s, a, value);
          }
        }
      });
}

QTable soft_value_iteration(const DiscreteMdp& mdp, const RewardSelector& selector,
                            const SoftSolverParams& params) {
  return solve_soft_values(mdp, compose_reward(mdp, selector), params).q;
}

QTable soft_value_iteration(const DiscreteMdp& mdp, const ActionTable& reward,
                            const SoftSolverParams& params) {
  return solve_soft_values(mdp, reward, params).q;
}

PolicyTable boltzmann_policy(const QTable& q, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  return PolicyTable::from_logits(q, alpha, alpha);
}

double log_partition(const QTable& q, double alpha, StateId s) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (s >= q.n_states()) throw std::out_of_range("log_partition: state out of range");
  return soft_maximum(q.row(s), alpha) / alpha;
}

std::vector<double> soft_state_values(const QTable& q, const PolicyTable& policy, double alpha) {
  if (!q.same_shape(policy.probs())) throw std::invalid_argument("soft_state_values: shape mismatch");
  std::vector<double> value(q.n_states(), 0.0);
  for (StateId s = 0; s < q.n_states(); ++s) {
    for (ActionId a = 0; a < q.n_actions(); ++a) {
      value[s] += policy.prob(s, a) * (q(s, a) - alpha * policy.log_prob(s, a));
    }
  }
  return value;
}

SolveResult evaluate_soft_policy(const DiscreteMdp& mdp, const ActionTable& reward,
                                 const PolicyTable& policy, const SoftSolverParams& params) {
  params.validate();
  check_discount(mdp);
  check_shapes(mdp, reward, "reward table");
  check_shapes(mdp, policy.probs(), "policy");
  const double gamma = mdp.discount();
  return detail::iterate_to_fixed_point(
      reward, gamma, params.tol, params.max_iter, "soft policy evaluation",
      [&](const ActionTable& q, ActionTable& next) {
        const auto value = soft_state_values(q, policy, params.alpha);
        for (StateId s = 0; s < mdp.n_states(); ++s) {
          for (ActionId a = 0; a < mdp.n_actions(); ++a) {
            next(s, a) = reward(s, a) + gamma * expected_next(mdp, s, a, value);
          }
        }
      });
}

QTable soft_policy_evaluation(const DiscreteMdp& mdp, const RewardSelector& selector,
                              const PolicyTable& policy, const SoftSolverParams& params) {
  return evaluate_soft_policy(mdp, compose_reward(mdp, selector), policy, params).q;
}

QTable soft_policy_evaluation(const DiscreteMdp& mdp, const ActionTable& reward,
                              const PolicyTable& policy, const SoftSolverParams& params) {
  return evaluate_soft_policy(mdp, reward, policy, params).q;
}

}  // namespace rqlab
