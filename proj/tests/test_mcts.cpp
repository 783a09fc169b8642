#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "rqlab/fixtures.hpp"
#include "rqlab/mcts.hpp"
#include "rqlab/residual.hpp"
#include "rqlab/soft_oracle.hpp"
#include "support/oracles.hpp"

using namespace rqlab;

namespace {

SearchTree one_node(std::vector<double> q, std::vector<std::uint32_t> visits) {
  SearchTree tree;
  SearchNode& n = tree.add_node(0, 0, false, std::vector<double>(q.size(), 0.0));
  n.q = std::move(q);
  n.visits = std::move(visits);
  return tree;
}

// Binary tree of depth 3 over 15 states; leaves 7..14 are terminal.
DiscreteMdp binary_tree(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DiscreteMdp m(15, 2, 0.9);
  for (StateId s = 0; s < 7; ++s) {
    for (ActionId a = 0; a < 2; ++a) {
      m.set_outcomes(s, a, {{2 * s + 1 + a, 1.0}});
      m.set_rewards(s, a, u(rng), u(rng));
    }
  }
  for (StateId s = 7; s < 15; ++s) m.make_terminal(s);
  return m;
}

PolicyTable random_prior(std::size_t S, std::size_t A, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  ActionTable logits(S, A);
  for (double& x : logits.values()) x = n(rng);
  return PolicyTable::from_logits(logits, 1.0);
}

}  // namespace

TEST(TreePolicy, UnvisitedNodeIsUniform) {
  const auto tree = one_node({3.0, -1.0, 0.0}, {0, 0, 0});
  const auto d = tree_policy_distribution(tree.root(), PolicyTable::uniform(1, 3), MctsParams{});
  for (double p : d) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
}

TEST(TreePolicy, GreedyLimitWithUniformPrior) {
  const auto tree = one_node({0.0, 1.0}, {3, 4});
  MctsParams p;
  p.epsilon = 0.0;
  const auto d = tree_policy_distribution(tree.root(), PolicyTable::uniform(1, 2), p);
  EXPECT_NEAR(d[0], 1.0 / (1.0 + std::exp(1.0)), 1e-12);
  EXPECT_NEAR(d[1], std::exp(1.0) / (1.0 + std::exp(1.0)), 1e-12);
}

TEST(TreePolicy, LargeCountsApproachSoftmax) {
  const auto tree = one_node({0.0, 1.0}, {4000000000u, 4000000000u});
  MctsParams p;
  p.epsilon = 0.01;
  const auto d = tree_policy_distribution(tree.root(), PolicyTable::uniform(1, 2), p);
  EXPECT_NEAR(d[1], std::exp(1.0) / (1.0 + std::exp(1.0)), 1e-3);
}

TEST(TreePolicy, ExplorationWeightIsClamped) {
  const auto tree = one_node({0.0, 5.0}, {1, 0});
  MctsParams p;
  p.epsilon = 1.0;  // 2 / ln 2 > 1
  const auto d = tree_policy_distribution(tree.root(), PolicyTable::uniform(1, 2), p);
  EXPECT_DOUBLE_EQ(d[0], 0.5);
}

TEST(Backpropagate, LeafStep) {
  SearchTree tree;
  SearchNode& n = tree.add_node(0, 0, false, {0.5, 0.0});
  std::vector<PathStep> path{{&n, 0}};
  backpropagate(path, 1.0, PolicyTable::uniform(1, 2), MctsParams{}, 0.9);
  EXPECT_NEAR(n.q[0], 1.4, 1e-12);
  EXPECT_EQ(n.visits[0], 1u);
  EXPECT_EQ(n.visits[1], 0u);
}

TEST(Backpropagate, InteriorStepsUseChildValue) {
  const auto prior = PolicyTable::uniform(2, 2);
  for (const auto& [child_q, v] : std::vector<std::pair<std::vector<double>, double>>{
           {{0.0, 0.0}, 0.0}, {{0.0, 1.0}, std::log(0.5 + 0.5 * std::exp(1.0))}}) {
    SearchTree tree;
    SearchNode& parent = tree.add_node(0, 0, false, {0.3, 0.0});
    // The child's edge reward equals its preset value, so a zero leaf return
    // leaves child.q unchanged and the parent sees V_R(child_q).
    SearchNode& child = tree.add_node(1, 1, false, {0.0, child_q[1]});
    child.q = child_q;
    parent.children[0].push_back(&child);
    std::vector<PathStep> path{{&parent, 0}, {&child, 1}};
    backpropagate(path, 0.0, prior, MctsParams{}, 0.9);
    EXPECT_EQ(child.q, child_q);
    EXPECT_NEAR(parent.q[0], 0.3 + 0.9 * v, 1e-12);
    EXPECT_EQ(parent.visits[0], 1u);
    EXPECT_EQ(child.visits[1], 1u);
  }
  EXPECT_THROW(backpropagate({}, 0.0, prior, MctsParams{}, 0.9), std::invalid_argument);
}

TEST(Rollout, TerminalLeafIsZero) {
  const DiscreteMdp m = fixtures::bandit2();
  Rng rng(1);
  EXPECT_EQ(rollout_return(1, m, PolicyTable::uniform(2, 2), 5, 0.9, rng), 0.0);
}

TEST(Rollout, DeterministicChainIsGeometric) {
  DiscreteMdp m(5, 1, 0.9);
  for (StateId s = 0; s < 4; ++s) {
    m.set_outcomes(s, 0, {{s + 1, 1.0}});
    m.set_rewards(s, 0, 0.0, 1.0);
  }
  m.make_terminal(4);
  Rng rng(1);
  EXPECT_NEAR(rollout_return(0, m, PolicyTable::uniform(5, 1), 3, 0.9, rng), 2.71, 1e-12);
}

TEST(Rollout, MeanMatchesTruncatedEvaluation) {
  std::mt19937_64 gen(21);
  const DiscreteMdp m = oracle::random_mdp(gen, 8, 3, 0.9, 2);
  const auto prior = random_prior(8, 3, 4);
  const double expect = oracle::truncated_return(m, oracle::addon_matrix(m), oracle::to_matrix(prior.probs()), 0, 6);
  Rng rng(5);
  const int n = 10000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = rollout_return(0, m, prior, 6, 0.9, rng);
    sum += r;
    sq += r * r;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sq / n - mean * mean) / (n - 1));
  EXPECT_LE(std::abs(mean - expect), 3.0 * se);
}

TEST(Plan, DepthOneRecoversAddon) {
  DiscreteMdp m(2, 3, 0.9);
  for (ActionId a = 0; a < 3; ++a) {
    m.set_outcomes(0, a, {{1, 1.0}});
    m.set_rewards(0, a, 0.0, 0.5 * a - 0.2);
  }
  m.make_terminal(1);
  MctsParams p;
  p.iter_max = 500;
  Rng rng(3);
  const auto r = plan(0, m, random_prior(2, 3, 1), p, rng);
  for (ActionId a = 0; a < 3; ++a) EXPECT_NEAR(r.tree.root().q[a], 0.5 * a - 0.2, 1e-12);
}

TEST(Plan, BanditRootPolicyMatchesResidualPolicy) {
  const DiscreteMdp m = fixtures::bandit2();
  const auto prior = boltzmann_policy(soft_value_iteration(m, RewardSelector::basic(), {}), 1.0);
  MctsParams p;
  p.iter_max = 1000;
  Rng rng(0);
  const auto r = plan(0, m, prior, p, rng);
  const auto exact = residual_policy(residual_soft_q_iteration(m, prior, {}), prior, {});
  EXPECT_LE(total_variation(root_policy(r, prior, p), exact.row(0)), 0.05);
}

TEST(Plan, RootOrderingMatchesBackwardInduction) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const DiscreteMdp m = binary_tree(seed);
    const auto prior = random_prior(15, 2, seed + 100);
    MctsParams p;
    p.iter_max = 3000;
    p.horizon = 3;
    Rng rng(seed);
    const auto r = plan(0, m, prior, p, rng);
    const auto exact = oracle::residual_backward_induction(m, oracle::to_matrix(prior.log_probs()), 1.0, 1.0, 3);
    const auto& q = r.tree.root().q;
    for (ActionId a = 0; a < 2; ++a) EXPECT_NEAR(q[a], exact[0][a], 1e-9) << "seed " << seed;
    const bool mcts_first = q[0] + prior.log_prob(0, 0) > q[1] + prior.log_prob(0, 1);
    const bool exact_first = exact[0][0] + prior.log_prob(0, 0) > exact[0][1] + prior.log_prob(0, 1);
    EXPECT_EQ(mcts_first, exact_first);
    EXPECT_EQ(r.action, exact_first ? 0u : 1u);
  }
}

TEST(Plan, VisitCountsAddUpAtRoot) {
  const DiscreteMdp m = binary_tree(9);
  MctsParams p;
  p.iter_max = 257;
  p.horizon = 3;
  Rng rng(2);
  const auto r = plan(0, m, PolicyTable::uniform(15, 2), p, rng);
  EXPECT_EQ(r.iterations, 257);
  EXPECT_EQ(r.tree.root().total_visits(), 257u);
}

TEST(Plan, SameSeedSameTree) {
  std::mt19937_64 gen(4);
  const DiscreteMdp m = oracle::random_mdp(gen, 12, 3, 0.9, 2);
  const auto prior = random_prior(12, 3, 6);
  MctsParams p;
  p.iter_max = 400;
  Rng a(77), b(77);
  const auto ra = plan(0, m, prior, p, a);
  const auto rb = plan(0, m, prior, p, b);
  EXPECT_EQ(ra.tree.size(), rb.tree.size());
  EXPECT_EQ(ra.tree.to_json(), rb.tree.to_json());
  EXPECT_EQ(ra.action, rb.action);
}

TEST(Plan, PlainModeEquivalenceWithoutPrior) {
  std::mt19937_64 gen(8);
  const DiscreteMdp m = oracle::random_mdp(gen, 10, 3, 0.9, 1);
  MctsParams residual;
  residual.iter_max = 300;
  residual.omega_prime = 0.0;
  MctsParams plain = residual;
  plain.mode = BackupMode::plain;
  plain.plain_reward = RewardSelector::addon();
  Rng a(5), b(5);
  const auto prior = PolicyTable::uniform(10, 3);
  EXPECT_EQ(plan(0, m, prior, residual, a).tree.to_json(), plan(0, m, prior, plain, b).tree.to_json());
}

TEST(Plan, SampledRootRuleAndTerminalRoot) {
  const DiscreteMdp m = fixtures::bandit2();
  MctsParams p;
  p.root_rule = RootActionRule::sample;
  Rng rng(1);
  EXPECT_LT(plan(0, m, PolicyTable::uniform(2, 2), p, rng).action, 2u);
  const auto at_terminal = plan(1, m, PolicyTable::uniform(2, 2), p, rng);
  EXPECT_EQ(at_terminal.iterations, 0);
}

TEST(Plan, RejectsBadInput) {
  const DiscreteMdp m = fixtures::bandit2();
  Rng rng(1);
  MctsParams p;
  p.horizon = 0;
  EXPECT_THROW(plan(0, m, PolicyTable::uniform(2, 2), p, rng), std::invalid_argument);
  p = MctsParams{};
  p.iter_max = 0;
  EXPECT_THROW(plan(0, m, PolicyTable::uniform(2, 2), p, rng), std::invalid_argument);
  EXPECT_THROW(plan(0, m, PolicyTable::uniform(3, 2), MctsParams{}, rng), std::invalid_argument);
  EXPECT_THROW(plan(5, m, PolicyTable::uniform(2, 2), MctsParams{}, rng), std::out_of_range);
}

TEST(Plan, StoredValuesStayBounded) {
  std::mt19937_64 gen(31);
  const DiscreteMdp m = oracle::random_mdp(gen, 20, 4, 0.95, 3);
  const auto prior = random_prior(20, 4, 2);
  MctsParams p;
  p.iter_max = 2000;
  p.horizon = 10;
  Rng rng(9);
  const auto r = plan(0, m, prior, p, rng);
  double lp_max = 0.0;
  for (double lp : prior.log_probs().values()) lp_max = std::max(lp_max, std::abs(lp));
  const double bound = (1.0 + lp_max + std::log(4.0)) / (1.0 - 0.95) + 1.0 / (1.0 - 0.95);
  for (const auto& node : r.tree.nodes()) {
    for (double q : node->q) {
      EXPECT_TRUE(std::isfinite(q));
      EXPECT_LE(std::abs(q), bound);
    }
  }
}
