#pragma once

#include "rqlab/mdp.hpp"
#include "rqlab/residual.hpp"
#include "rqlab/soft_oracle.hpp"
#include "rqlab/table.hpp"

namespace rqlab {

// Alternative customization schemes, solved tabularly with the same soft
// solvers as the residual methods.

struct GreedyParams {
  /// KL weight toward the prior.
  double lambda = 1.0;
  double alpha_hat = 1.0;
  double tol = 1e-8;
  int max_iter = 100000;

  void validate() const;
};

struct GreedyResult {
  /// Soft Q of the add-on-only task under the returned policy.
  QTable q;
  PolicyTable policy;
  int iterations = 0;
};

/// Greedy reward decomposition. Alternates
///   Q~ <- soft evaluation of r_R under pi~ (entropy weight alpha_hat), and
///   pi~(a|s) proportional to exp((Q~(s,a) + lambda ln prior(a|s)) / (alpha_hat + lambda)),
/// starting from pi~ = prior, until the policy moves by <= tol.
GreedyResult greedy_customization(const DiscreteMdp& mdp, const PolicyTable& prior,
                                  const GreedyParams& params);

struct KlRewardParams {
  double beta = 1.0;
  /// pi_{t+1} = (1 - damping) pi_t + damping * new policy.
  double damping = 0.5;
  int outer_iters = 200;
  double tol = 1e-8;
  /// Inner soft solve; alpha is the customized policy's temperature.
  SoftSolverParams inner{};

  void validate() const;
};

struct KlRewardResult {
  PolicyTable policy;
  bool converged = false;
  int outer_iterations = 0;
  /// Sup-norm gap between the last two iterates.
  double last_gap = 0.0;
};

/// KL-penalized reward r_R - beta ln(pi_t / prior), re-solved and damped each
/// outer step. Non-convergence is reported through the result, not thrown.
KlRewardResult kl_augmented_rl(const DiscreteMdp& mdp, const PolicyTable& prior,
                               const KlRewardParams& params);

struct LikelihoodResult {
  QTable q_aug;
  PolicyTable policy;
};

/// Solves the model with reward r_R + omega' ln prior at temperature alpha_hat.
LikelihoodResult likelihood_augmented_rl(const DiscreteMdp& mdp, const PolicyTable& prior,
                                         const CustomizationParams& params);

}  // namespace rqlab
