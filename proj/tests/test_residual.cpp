#include <gtest/gtest.h>

#include <cmath>

#include "rqlab/envs.hpp"
#include "rqlab/fixtures.hpp"
#include "rqlab/residual.hpp"
#include "rqlab/soft_oracle.hpp"
#include "support/oracles.hpp"

using namespace rqlab;

namespace {

const SoftSolverParams kTight{1.0, 1e-11, 1000000};
const CustomizationParams kDefault{1.0, 1.0, 1e-11, 1000000};

PolicyTable oracle_prior(const DiscreteMdp& m, double alpha = 1.0) {
  return boltzmann_policy(soft_value_iteration(m, RewardSelector::basic(), {alpha, 1e-12, 1000000}), alpha);
}

ActionTable zero_addon(const DiscreteMdp& m, DiscreteMdp& out) {
  out = m;
  for (StateId s = 0; s < m.n_states(); ++s) {
    if (m.is_terminal(s)) continue;
    for (ActionId a = 0; a < m.n_actions(); ++a) out.set_rewards(s, a, m.basic_reward(s, a), 0.0);
  }
  return out.addon_rewards();
}

}  // namespace

TEST(ResidualSoftValue, LogSumOfPriorIsZero) {
  const std::vector<double> q{0.0, 0.0, 0.0};
  const std::vector<double> lp{std::log(0.2), std::log(0.3), std::log(0.5)};
  EXPECT_NEAR(residual_soft_value(q, lp, 1.0, 1.0), 0.0, 1e-15);
  const std::vector<double> q2{0.0, 1.0};
  const std::vector<double> half{std::log(0.5), std::log(0.5)};
  EXPECT_NEAR(residual_soft_value(q2, half, 1.0, 1.0), std::log(0.5 + 0.5 * std::exp(1.0)), 1e-12);
}

TEST(ResidualIteration, BanditCollapsesToAddon) {
  const DiscreteMdp m = fixtures::bandit2();
  const auto q_r = residual_soft_q_iteration(m, oracle_prior(m), kDefault);
  EXPECT_NEAR(q_r.values(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(q_r.values(0, 1), 1.0, 1e-12);
}

TEST(ResidualIteration, ZeroAddonGivesZero) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5; ++i) {
    DiscreteMdp m = oracle::random_mdp(rng, 7, 3, 0.9, 1);
    DiscreteMdp z(1, 1, 0.0);
    zero_addon(m, z);
    for (double w : {0.5, 1.0, 2.0}) {
      const CustomizationParams p{w, w, 1e-11, 1000000};
      const auto q_r = residual_soft_q_iteration(z, oracle_prior(z), p);
      for (double v : q_r.values.values()) EXPECT_NEAR(v, 0.0, 1e-10);
    }
  }
}

TEST(ResidualIteration, TwoStateLoopIdentity) {
  const DiscreteMdp m = fixtures::two_state_loop();
  const auto q_star = soft_value_iteration(m, RewardSelector::basic(), kTight);
  const auto q_hat = soft_value_iteration(m, RewardSelector::combined(1.0), kTight);
  const auto q_r = residual_soft_q_iteration(m, boltzmann_policy(q_star, 1.0), kDefault);
  ActionTable sum = q_r.values;
  for (std::size_t i = 0; i < sum.values().size(); ++i) sum.values()[i] += q_star.values()[i];
  EXPECT_LE(sup_norm_diff(sum, q_hat), 1e-6);
}

// Q_R + omega Q* = Q_hat holds for any alpha_hat once omega' = omega * alpha.
TEST(ResidualIteration, IdentityOnRandomInstancesForAnyTemperature) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int i = 0; i < 15; ++i) {
    const DiscreteMdp m = oracle::random_mdp(rng, 4 + i % 8, 2 + i % 3, 0.8);
    const double alpha = u(rng), omega = u(rng), alpha_hat = u(rng);
    const auto q_star = oracle::soft_q(m, oracle::basic_matrix(m), alpha);
    const auto prior = PolicyTable::from_logits(
        [&] {
          ActionTable t(m.n_states(), m.n_actions());
          for (StateId s = 0; s < m.n_states(); ++s)
            for (ActionId a = 0; a < m.n_actions(); ++a) t(s, a) = q_star[s][a];
          return t;
        }(),
        alpha);
    const auto q_r = residual_soft_q_iteration(m, prior, {omega * alpha, alpha_hat, 1e-11, 1000000});
    const auto q_hat = oracle::soft_q(m, oracle::combined_matrix(m, omega), alpha_hat);
    double gap = 0.0;
    for (StateId s = 0; s < m.n_states(); ++s) {
      for (ActionId a = 0; a < m.n_actions(); ++a) {
        gap = std::max(gap, std::abs(q_r.values(s, a) + omega * q_star[s][a] - q_hat[s][a]));
      }
    }
    EXPECT_LE(gap, 1e-8) << "instance " << i;
  }
}

TEST(ResidualIteration, RejectsMismatchedPrior) {
  const DiscreteMdp m = fixtures::two_state_loop();
  EXPECT_THROW(residual_soft_q_iteration(m, PolicyTable::uniform(3, 2), kDefault), std::invalid_argument);
  EXPECT_THROW(residual_soft_q_iteration(m, PolicyTable::uniform(2, 2), {-1.0, 1.0, 1e-8, 10}),
               std::invalid_argument);
  EXPECT_THROW(residual_soft_q_iteration(m, PolicyTable::uniform(2, 2), {1.0, 0.0, 1e-8, 10}),
               std::invalid_argument);
  EXPECT_THROW(residual_soft_q_iteration(m, PolicyTable::uniform(2, 2), {1.0, 1.0, 1e-12, 2}),
               ConvergenceError);
}

TEST(ResidualPolicy, BanditIsUniform) {
  const DiscreteMdp m = fixtures::bandit2();
  const auto prior = oracle_prior(m);
  EXPECT_NEAR(prior.prob(0, 0), 0.7310585786, 1e-9);
  ResidualQTable q_r{QTable(2, 2)};
  q_r.values(0, 1) = 1.0;
  const auto pi = residual_policy(q_r, prior, kDefault);
  EXPECT_NEAR(pi.prob(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(pi.prob(0, 1), 0.5, 1e-12);
}

TEST(ResidualPolicy, DegenerateWeights) {
  const DiscreteMdp m = fixtures::two_state_loop();
  const auto prior = oracle_prior(m);
  ResidualQTable q_r{QTable(2, 2)};
  q_r.values(0, 0) = 0.3;
  q_r.values(1, 1) = -1.2;
  const auto ignore_prior = residual_policy(q_r, prior, {0.0, 0.7, 1e-8, 100});
  EXPECT_LE(max_total_variation(ignore_prior, boltzmann_policy(q_r.values, 0.7)), 1e-15);
  const auto same = residual_policy(ResidualQTable{QTable(2, 2)}, prior, {0.4, 0.4, 1e-8, 100});
  EXPECT_LE(max_total_variation(same, prior), 1e-12);
  const auto logits = residual_logits(q_r, prior, 2.0);
  EXPECT_NEAR(logits(1, 1), -1.2 + 2.0 * prior.log_prob(1, 1), 1e-15);
}

TEST(ResidualPolicy, MatchesCombinedOracle) {
  const DiscreteMdp m = fixtures::two_state_loop();
  const auto q_r = residual_soft_q_iteration(m, oracle_prior(m), kDefault);
  const auto pi = residual_policy(q_r, oracle_prior(m), kDefault);
  const auto ref = oracle::softmax_rows(oracle::soft_q(m, oracle::combined_matrix(m, 1.0), 1.0), 1.0);
  EXPECT_LE(oracle::sup_diff(ref, pi.probs()), 1e-9);
}

TEST(ResidualTdTarget, TerminalDropsBootstrap) {
  const DiscreteMdp m = fixtures::two_state_loop();
  const auto prior = PolicyTable::uniform(2, 2);
  ResidualQTable target{QTable(2, 2, 5.0)};
  EXPECT_EQ(residual_td_target(0.25, 0, true, 0.9, target, prior, kDefault), 0.25);
  EXPECT_NEAR(residual_td_target(0.25, 0, false, 0.9, target, prior, kDefault), 0.25 + 0.9 * 5.0, 1e-12);
}

TEST(ResidualPolicyEvaluation, OptimalPolicyReproducesFixedPoint) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 5; ++i) {
    const DiscreteMdp m = oracle::random_mdp(rng, 9, 3, 0.9, 1);
    const auto prior = oracle_prior(m, 0.8);
    const CustomizationParams p{0.8, 0.8, 1e-11, 1000000};
    const auto q_r = residual_soft_q_iteration(m, prior, p);
    const auto pi = residual_policy(q_r, prior, p);
    const auto eval = residual_policy_evaluation(m, prior, pi, p);
    EXPECT_LE(sup_norm_diff(eval.values, q_r.values), 1e-8);
  }
}

TEST(ResidualPolicyIteration, BanditOneStep) {
  const DiscreteMdp m = fixtures::bandit2();
  const auto r = residual_soft_policy_iteration(m, oracle_prior(m), kDefault);
  EXPECT_NEAR(r.policy.prob(0, 0), 0.5, 1e-9);
  EXPECT_LE(r.improvement_steps, 2);
}

TEST(ResidualPolicyIteration, TwoStateLoopMatchesOracle) {
  const DiscreteMdp m = fixtures::two_state_loop();
  int seen = 0;
  const auto r = residual_soft_policy_iteration(m, oracle_prior(m), kDefault, [&](const PolicyTable&) { ++seen; });
  const auto ref = oracle::softmax_rows(oracle::soft_q(m, oracle::combined_matrix(m, 1.0), 1.0), 1.0);
  for (StateId s = 0; s < 2; ++s) {
    const std::vector<double> row(r.policy.row(s).begin(), r.policy.row(s).end());
    EXPECT_LE(total_variation(row, ref[s]), 1e-6);
  }
  EXPECT_GE(seen, r.improvement_steps);
}

TEST(ResidualPolicyIteration, PriorRecovery) {
  std::mt19937_64 rng(8);
  DiscreteMdp z(1, 1, 0.0);
  zero_addon(oracle::random_mdp(rng, 6, 2, 0.9, 1), z);
  const auto prior = oracle_prior(z);
  const auto r = residual_soft_policy_iteration(z, prior, kDefault);
  EXPECT_LE(max_total_variation(r.policy, prior), 1e-9);
  for (double v : r.q_r.values.values()) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(TdLearner, ParamsValidate) {
  TdLearnerParams p;
  EXPECT_NO_THROW(p.validate());
  p.batch_size = p.replay_capacity + 1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = TdLearnerParams{};
  p.learning_rate = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = TdLearnerParams{};
  p.exploration_epsilon = 1.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(TdLearner, BanditLearnsAddonExactly) {
  EnvSpec spec;
  spec.name = "bandit-2";
  auto built = make_env(spec);
  const auto prior = oracle_prior(*built.mdp);
  TdLearnerParams p;
  p.learning_rate = 1.0;
  p.lr_decay_updates = 0.0;
  p.episodes = 40;
  p.steps_per_episode = 1;
  p.replay_capacity = 1;
  p.batch_size = 1;
  Rng rng(1);
  const auto r = residual_soft_q_learning(built.env, prior, kDefault, p, rng);
  EXPECT_EQ(r.q_r.values(0, 0), 0.0);
  EXPECT_EQ(r.q_r.values(0, 1), 1.0);
  EXPECT_EQ(r.curve.size(), 40u);
}

TEST(TdLearner, WaitsForTheBufferToFill) {
  EnvSpec spec;
  spec.name = "bandit-2";
  auto built = make_env(spec);
  TdLearnerParams p;
  p.episodes = 3;
  p.batch_size = 8;
  p.replay_capacity = 16;
  Rng rng(1);
  const auto r = residual_soft_q_learning(built.env, oracle_prior(*built.mdp), kDefault, p, rng);
  EXPECT_EQ(r.updates, 0u);
  EXPECT_EQ(r.env_steps, 3u);
}

TEST(TdLearner, TwoStateLoopConverges) {
  EnvSpec spec;
  spec.name = "two-state-loop";
  auto built = make_env(spec);
  const auto prior = oracle_prior(*built.mdp);
  const auto exact = residual_soft_q_iteration(*built.mdp, prior, kDefault);
  TdLearnerParams p;
  p.episodes = 20000;
  p.steps_per_episode = 20;
  Rng rng(4);
  const auto r = residual_soft_q_learning(built.env, prior, kDefault, p, rng, &exact);
  EXPECT_LE(sup_norm_diff(r.q_r.values, exact.values), 0.05);
  ASSERT_TRUE(r.curve.back().sup_norm_gap.has_value());
  EXPECT_LT(*r.curve.back().sup_norm_gap, *r.curve.front().sup_norm_gap);
}

TEST(TdLearner, SameSeedSameCurve) {
  EnvSpec spec;
  spec.name = "centering-chain";
  auto built = make_env(spec);
  const auto prior = oracle_prior(*built.mdp);
  TdLearnerParams p;
  p.episodes = 300;
  p.exploration_epsilon = 0.05;
  p.exploring_starts = false;
  const auto run = [&] {
    Rng rng(13);
    Environment env = built.env;
    return residual_soft_q_learning(env, prior, kDefault, p, rng);
  };
  const auto a = run();
  const auto b = run();
  EXPECT_EQ(learning_curve_csv(a.curve), learning_curve_csv(b.curve));
  EXPECT_EQ(a.q_r.values, b.q_r.values);
}

TEST(TdLearner, CurveCsvShape) {
  std::vector<LearningCurvePoint> curve{{0, 1.5, -2.0, 0.25}, {1, 2.0, 0.0, std::nullopt}};
  EXPECT_EQ(learning_curve_csv(curve),
            "episode_index,addon_return,basic_return,sup_norm_gap_to_exact\n0,1.5,-2,0.25\n1,2,0,\n");
}
