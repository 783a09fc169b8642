#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rqlab/mdp.hpp"
#include "rqlab/rng.hpp"
#include "rqlab/table.hpp"

namespace rqlab {

enum class BackupMode {
  /// Nodes store residual values; tree policy and backup use the prior.
  residual,
  /// Plain maximum-entropy MCTS on soft values of `plain_reward`.
  plain,
};

enum class RootActionRule {
  /// argmax_a q(root, a) + omega' ln prior(a|root).
  argmax,
  /// Sample from the epsilon = 0 tree policy at the root.
  sample,
};

struct MctsParams {
  int iter_max = 150;
  int horizon = 6;
  double epsilon = 0.1;
  double omega_prime = 1.0;
  double alpha_hat = 1.0;
  BackupMode mode = BackupMode::residual;
  RootActionRule root_rule = RootActionRule::argmax;
  /// Roll-outs averaged per leaf evaluation.
  int rollouts = 1;
  /// Reward channel backed up in plain mode.
  RewardSelector plain_reward = RewardSelector::addon();

  void validate() const;
};

struct SearchNode {
  StateId state = 0;
  int depth = 0;
  bool terminal = false;
  /// Residual values (residual mode) or soft values (plain mode).
  std::vector<double> q;
  std::vector<std::uint32_t> visits;
  /// Planning reward of each edge, fixed when the node is created.
  std::vector<double> reward;
  /// children[a] holds one node per sampled successor of action a.
  std::vector<std::vector<SearchNode*>> children;
  /// Actions are expanded in index order; actions < tried have children.
  std::size_t tried = 0;

  bool fully_expanded() const { return tried == q.size(); }
  std::uint64_t total_visits() const;
  SearchNode* child(ActionId a, StateId next) const;
};

/// Owns every node of one search. Node addresses are stable.
class SearchTree {
 public:
  SearchTree() = default;
  SearchTree(SearchTree&&) noexcept = default;
  SearchTree& operator=(SearchTree&&) noexcept = default;

  SearchNode& add_node(StateId state, int depth, bool terminal, std::vector<double> reward);
  SearchNode& root() { return *nodes_.front(); }
  const SearchNode& root() const { return *nodes_.front(); }
  std::size_t size() const { return nodes_.size(); }
  std::span<const std::unique_ptr<SearchNode>> nodes() const { return nodes_; }

  /// {"nodes": [{"id", "state", "depth", "terminal", "q", "visits", "children"}]}
  std::string to_json() const;

 private:
  std::vector<std::unique_ptr<SearchNode>> nodes_;
};

struct PathStep {
  SearchNode* node;
  ActionId action;
};

/// Tree policy at `node`:
///   (1 - lambda) softmax(logits / alpha_hat) + lambda / |A|,
///   lambda = min(1, epsilon |A| / ln(sum_a N(s,a) + 1)),  lambda = 1 when sum N = 0.
/// Logits are q + omega' ln prior in residual mode and q in plain mode.
std::vector<double> tree_policy_distribution(const SearchNode& node, const PolicyTable& prior,
                                             const MctsParams& params);

/// Backs a leaf return up a root-to-leaf path. The last step gets
/// reward + gamma * leaf_return; earlier steps get reward + gamma * V(child),
/// where V is the residual soft value (plain mode: alpha_hat-scaled
/// log-sum-exp of the child's q). Visit counts increase along the path.
/// Throws std::invalid_argument on an empty path.
void backpropagate(std::span<const PathStep> path, double leaf_return, const PolicyTable& prior,
                   const MctsParams& params, double gamma);

/// Discounted add-on return of one roll-out that samples actions from the
/// prior until a terminal state or `depth_remaining` actions.
double rollout_return(StateId leaf_state, const DiscreteMdp& model, const PolicyTable& prior,
                      int depth_remaining, double gamma, Rng& rng,
                      const RewardSelector& channel = RewardSelector::addon());

struct PlanResult {
  SearchTree tree;
  ActionId action;
  int iterations = 0;
};

/// Residual maximum-entropy MCTS from `root_state` against a known model.
/// The discount is the model's.
PlanResult plan(StateId root_state, const DiscreteMdp& model, const PolicyTable& prior,
                const MctsParams& params, Rng& rng);

/// Root tree policy with epsilon forced to 0.
std::vector<double> root_policy(const PlanResult& result, const PolicyTable& prior, const MctsParams& params);

}  // namespace rqlab
