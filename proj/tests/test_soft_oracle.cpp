#include <gtest/gtest.h>

#include <cmath>

#include "rqlab/fixtures.hpp"
#include "rqlab/soft_oracle.hpp"
#include "support/oracles.hpp"

using namespace rqlab;

namespace {

const SoftSolverParams kTight{1.0, 1e-10, 1000000};

DiscreteMdp zero_reward_mdp(double gamma) {
  std::mt19937_64 rng(11);
  DiscreteMdp m = oracle::random_mdp(rng, 6, 3, gamma);
  for (StateId s = 0; s < 6; ++s) {
    for (ActionId a = 0; a < 3; ++a) m.set_rewards(s, a, 0.0, 0.0);
  }
  return m;
}

}  // namespace

TEST(SoftValueIteration, BanditEqualsReward) {
  const QTable q = soft_value_iteration(fixtures::bandit2(), RewardSelector::basic(), kTight);
  EXPECT_NEAR(q(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(q(0, 1), 0.0, 1e-12);
}

TEST(SoftValueIteration, TwoStateLoopMatchesOracleAndBounds) {
  const DiscreteMdp m = fixtures::two_state_loop();
  const QTable q = soft_value_iteration(m, RewardSelector::basic(), kTight);
  const auto ref = oracle::soft_q(m, oracle::basic_matrix(m), 1.0);
  EXPECT_LE(oracle::sup_diff(ref, q), 1e-9);
  const double qax = q(fixtures::kStateA, fixtures::kActionX);
  EXPECT_GE(qax, 10.0);
  EXPECT_LE(qax, (1.0 + std::log(2.0)) / 0.1);
}

TEST(SoftValueIteration, ZeroRewardGivesPureEntropyValue) {
  for (double gamma : {0.0, 0.5, 0.9}) {
    const DiscreteMdp m = zero_reward_mdp(gamma);
    for (double alpha : {0.5, 1.0, 2.0}) {
      const QTable q = soft_value_iteration(m, RewardSelector::basic(), {alpha, 1e-11, 1000000});
      const double expect = alpha * std::log(3.0) * gamma / (1.0 - gamma);
      for (double v : q.values()) EXPECT_NEAR(v, expect, 1e-9);
    }
  }
}

TEST(SoftValueIteration, RandomInstancesMatchOracle) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 20; ++i) {
    const DiscreteMdp m = oracle::random_mdp(rng, 3 + i % 9, 2 + i % 3, 0.8, i % 3);
    const double alpha = 0.3 + 0.2 * (i % 5);
    const QTable q = soft_value_iteration(m, RewardSelector::combined(0.7), {alpha, 1e-11, 1000000});
    const auto ref = oracle::soft_q(m, oracle::combined_matrix(m, 0.7), alpha);
    EXPECT_LE(oracle::sup_diff(ref, q), 1e-9) << "instance " << i;
  }
}

TEST(SoftValueIteration, NonConvergenceCarriesResidual) {
  const DiscreteMdp m = fixtures::two_state_loop();
  try {
    soft_value_iteration(m, RewardSelector::basic(), {1.0, 1e-12, 3});
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 3);
    EXPECT_GT(e.last_residual(), 0.0);
  }
}

TEST(SoftValueIteration, RejectsBadParams) {
  const DiscreteMdp m = fixtures::bandit2();
  EXPECT_THROW(soft_value_iteration(m, RewardSelector::basic(), {0.0, 1e-8, 10}), std::invalid_argument);
  EXPECT_THROW(soft_value_iteration(m, RewardSelector::basic(), {1.0, 0.0, 10}), std::invalid_argument);
  EXPECT_THROW(soft_value_iteration(m, RewardSelector::basic(), {1.0, 1e-8, 0}), std::invalid_argument);
}

TEST(Boltzmann, Examples) {
  QTable q(1, 2);
  q(0, 0) = 1.0;
  const auto pi = boltzmann_policy(q, 1.0);
  EXPECT_NEAR(pi.prob(0, 0), 0.7310585786, 1e-9);
  EXPECT_NEAR(pi.prob(0, 1), 0.2689414214, 1e-9);
  const auto hot = boltzmann_policy(q, 100.0);
  EXPECT_NEAR(hot.prob(0, 0), 0.5, 1e-2);
  QTable flat(1, 2, 42.0);
  EXPECT_DOUBLE_EQ(boltzmann_policy(flat, 0.3).prob(0, 1), 0.5);
  EXPECT_THROW(boltzmann_policy(q, 0.0), std::invalid_argument);
  EXPECT_THROW(boltzmann_policy(q, -1.0), std::invalid_argument);
}

TEST(LogPartition, Examples) {
  QTable q(1, 2);
  q(0, 0) = 1.0;
  EXPECT_NEAR(log_partition(q, 1.0, 0), std::log(std::exp(1.0) + 1.0), 1e-12);
  EXPECT_NEAR(log_partition(QTable(1, 2), 1.0, 0), std::log(2.0), 1e-15);
  EXPECT_THROW(log_partition(q, 0.0, 0), std::invalid_argument);
  const auto pi = boltzmann_policy(q, 1.0);
  const double ln_z = log_partition(q, 1.0, 0);
  for (ActionId a = 0; a < 2; ++a) EXPECT_NEAR(q(0, a) - pi.log_prob(0, a) - ln_z, 0.0, 1e-12);
}

TEST(SoftPolicyEvaluation, BanditAddonIgnoresPolicy) {
  const DiscreteMdp m = fixtures::bandit2();
  ActionTable probs(2, 2);
  probs(0, 0) = 0.9;
  probs(0, 1) = 0.1;
  probs(1, 0) = probs(1, 1) = 0.5;
  const auto q = soft_policy_evaluation(m, RewardSelector::addon(), PolicyTable::from_probabilities(probs), kTight);
  EXPECT_NEAR(q(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(q(0, 1), 1.0, 1e-12);
}

TEST(SoftPolicyEvaluation, UniformOnZeroRewardIsEntropyOnly) {
  const DiscreteMdp m = zero_reward_mdp(0.9);
  const auto q = soft_policy_evaluation(m, RewardSelector::basic(), PolicyTable::uniform(6, 3), kTight);
  for (double v : q.values()) EXPECT_NEAR(v, 0.9 * std::log(3.0) / 0.1, 1e-8);
}

TEST(SoftPolicyEvaluation, MatchesLinearSolve) {
  const DiscreteMdp loop = fixtures::two_state_loop();
  const auto q = soft_policy_evaluation(loop, RewardSelector::addon(), PolicyTable::uniform(2, 2), kTight);
  const oracle::Matrix uniform(2, std::vector<double>(2, 0.5));
  EXPECT_LE(oracle::sup_diff(oracle::soft_eval(loop, oracle::addon_matrix(loop), uniform, 1.0), q), 1e-9);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const DiscreteMdp m = oracle::random_mdp(rng, 8, 3, 0.85, 1);
    ActionTable logits(8, 3);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double& x : logits.values()) x = n(rng);
    const auto pi = PolicyTable::from_logits(logits, 1.0);
    const auto got = soft_policy_evaluation(m, RewardSelector::basic(), pi, {0.6, 1e-11, 1000000});
    const auto ref = oracle::soft_eval(m, oracle::basic_matrix(m), oracle::to_matrix(pi.probs()), 0.6);
    EXPECT_LE(oracle::sup_diff(ref, got), 1e-9);
  }
}

TEST(SoftPolicyEvaluation, BoltzmannOfOptimumIsItsOwnValue) {
  const DiscreteMdp m = fixtures::two_state_loop();
  const QTable q = soft_value_iteration(m, RewardSelector::basic(), kTight);
  const auto pi = boltzmann_policy(q, 1.0);
  const QTable back = soft_policy_evaluation(m, RewardSelector::basic(), pi, kTight);
  EXPECT_LE(sup_norm_diff(q, back), 1e-8);
  const auto v = soft_state_values(back, pi, 1.0);
  for (StateId s = 0; s < 2; ++s) EXPECT_NEAR(v[s], log_partition(q, 1.0, s), 1e-8);
}

TEST(SoftValueIteration, ResidualsAreRecordedPerSweep) {
  const auto r = solve_soft_values(fixtures::two_state_loop(), fixtures::two_state_loop().basic_rewards(), kTight);
  EXPECT_EQ(static_cast<int>(r.residuals.size()), r.iterations);
  EXPECT_GT(r.iterations, 1);
}
