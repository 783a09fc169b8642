#pragma once

#include <stdexcept>
#include <vector>

#include "rqlab/mdp.hpp"
#include "rqlab/table.hpp"

namespace rqlab {

struct SoftSolverParams {
  double alpha = 1.0;
  /// Target sup-norm distance to the true fixed point.
  double tol = 1e-8;
  int max_iter = 100000;

  void validate() const;
};

/// Thrown by every fixed-point solver that runs out of iterations.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual, int iterations)
      : std::runtime_error(what), last_residual_(last_residual), iterations_(iterations) {}
  double last_residual() const { return last_residual_; }
  int iterations() const { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

struct SolveResult {
  QTable q;
  int iterations = 0;
  /// Sup-norm gap between successive iterates, one entry per sweep.
  std::vector<double> residuals;
};

/// Soft value iteration with synchronous sweeps:
///   Q(s,a) = r(s,a) + gamma * E_s'[ alpha * ln sum_a' exp(Q(s',a') / alpha) ].
/// Stops once the iterate gap is <= tol * (1 - gamma) / gamma, which bounds
/// the distance to Q* by tol.
SolveResult solve_soft_values(const DiscreteMdp& mdp, const ActionTable& reward,
                              const SoftSolverParams& params);

QTable soft_value_iteration(const DiscreteMdp& mdp, const RewardSelector& selector,
                            const SoftSolverParams& params);
QTable soft_value_iteration(const DiscreteMdp& mdp, const ActionTable& reward,
                            const SoftSolverParams& params);

/// pi(a|s) = exp(Q(s,a)/alpha) / Z_s. Throws on alpha <= 0.
PolicyTable boltzmann_policy(const QTable& q, double alpha);

/// ln Z_s = ln sum_a exp(Q(s,a)/alpha). Throws on alpha <= 0.
double log_partition(const QTable& q, double alpha, StateId s);

/// Soft evaluation of a fixed policy:
///   Q(s,a) = r(s,a) + gamma * E_s' E_a'~pi [ Q(s',a') - alpha * ln pi(a'|s') ].
SolveResult evaluate_soft_policy(const DiscreteMdp& mdp, const ActionTable& reward,
                                 const PolicyTable& policy, const SoftSolverParams& params);

QTable soft_policy_evaluation(const DiscreteMdp& mdp, const RewardSelector& selector,
                              const PolicyTable& policy, const SoftSolverParams& params);
QTable soft_policy_evaluation(const DiscreteMdp& mdp, const ActionTable& reward,
                              const PolicyTable& policy, const SoftSolverParams& params);

/// Entropy-augmented state value of `policy` under its soft Q:
///   V(s) = sum_a pi(a|s) (Q(s,a) - alpha ln pi(a|s)).
std::vector<double> soft_state_values(const QTable& q, const PolicyTable& policy, double alpha);

}  // namespace rqlab
