#include "rqlab/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "rqlab/numerics.hpp"
#include "rqlab/residual.hpp"

namespace rqlab {

void MctsParams::validate() const {
  if (iter_max < 1) throw std::invalid_argument("iter_max must be >= 1");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  if (!(omega_prime >= 0.0)) throw std::invalid_argument("omega_prime must be >= 0");
  if (!(alpha_hat > 0.0)) throw std::invalid_argument("alpha_hat must be positive");
  if (rollouts < 1) throw std::invalid_argument("rollouts must be >= 1");
}

std::uint64_t SearchNode::total_visits() const {
  return std::accumulate(visits.begin(), visits.end(), std::uint64_t{0});
}

SearchNode* SearchNode::child(ActionId a, StateId next) const {
  for (SearchNode* c : children.at(a)) {
    if (c->state == next) return c;
  }
  return nullptr;
}

SearchNode& SearchTree::add_node(StateId state, int depth, bool terminal, std::vector<double> reward) {
  auto node = std::make_unique<SearchNode>();
  node->state = state;
  node->depth = depth;
  node->terminal = terminal;
  const std::size_t n_actions = reward.size();
  node->q.assign(n_actions, 0.0);
  node->visits.assign(n_actions, 0);
  node->reward = std::move(reward);
  node->children.resize(n_actions);
  nodes_.push_back(std::move(node));
  return *nodes_.back();
}

std::string SearchTree::to_json() const {
  std::unordered_map<const SearchNode*, std::size_t> ids;
  for (std::size_t i = 0; i < nodes_.size(); ++i) ids[nodes_[i].get()] = i;
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const SearchNode& n = *nodes_[i];
    nlohmann::json children = nlohmann::json::array();
    for (const auto& per_action : n.children) {
      nlohmann::json ids_for_action = nlohmann::json::array();
      for (const SearchNode* c : per_action) ids_for_action.push_back(ids.at(c));
      children.push_back(std::move(ids_for_action));
    }
    list.push_back({{"id", i},
                    {"state", n.state},
                    {"depth", n.depth},
                    {"terminal", n.terminal},
                    {"q", n.q},
                    {"visits", n.visits},
                    {"children", std::move(children)}});
  }
  return nlohmann::json{{"nodes", std::move(list)}}.dump();
}

namespace {

std::vector<double> node_logits(const SearchNode& node, const PolicyTable& prior, const MctsParams& params) {
  std::vector<double> logits(node.q);
  if (params.mode == BackupMode::residual) {
    const auto log_prior = prior.log_row(node.state);
    for (std::size_t a = 0; a < logits.size(); ++a) logits[a] += params.omega_prime * log_prior[a];
  }
  return logits;
}

double node_value(const SearchNode& node, const PolicyTable& prior, const MctsParams& params) {
  if (params.mode == BackupMode::residual) {
    return residual_soft_value(node.q, prior.log_row(node.state), params.omega_prime, params.alpha_hat);
  }
  return soft_maximum(node.q, params.alpha_hat);
}

double channel_reward(const DiscreteMdp& model, StateId s, ActionId a, const RewardSelector& channel) {
  switch (channel.mode()) {
    case RewardSelector::Mode::basic:
      return model.basic_reward(s, a);
    case RewardSelector::Mode::addon:
      return model.addon_reward(s, a);
    case RewardSelector::Mode::combined:
      return channel.omega() * model.basic_reward(s, a) + model.addon_reward(s, a);
  }
  return 0.0;
}

std::vector<double> edge_rewards(const DiscreteMdp& model, StateId s, const MctsParams& params) {
  const RewardSelector channel = params.mode == BackupMode::residual ? RewardSelector::addon() : params.plain_reward;
  std::vector<double> r(model.n_actions());
  for (ActionId a = 0; a < model.n_actions(); ++a) r[a] = channel_reward(model, s, a, channel);
  return r;
}

}  // namespace

std::vector<double> tree_policy_distribution(const SearchNode& node, const PolicyTable& prior,
                                             const MctsParams& params) {
  const std::size_t n_actions = node.q.size();
  std::vector<double> dist(n_actions, 1.0 / static_cast<double>(n_actions));
  const std::uint64_t total = node.total_visits();
  double lambda = 1.0;
  if (total > 0) {
    lambda = std::min(1.0, params.epsilon * static_cast<double>(n_actions) /
                               std::log(static_cast<double>(total) + 1.0));
  }
  if (lambda >= 1.0) return dist;
  std::vector<double> soft(n_actions);
  softmax(node_logits(node, prior, params), params.alpha_hat, soft);
  for (std::size_t a = 0; a < n_actions; ++a) {
    dist[a] = (1.0 - lambda) * soft[a] + lambda / static_cast<double>(n_actions);
  }
  return dist;
}

void backpropagate(std::span<const PathStep> path, double leaf_return, const PolicyTable& prior,
                   const MctsParams& params, double gamma) {
  if (path.empty()) throw std::invalid_argument("backpropagate: empty path");
  for (std::size_t i = path.size(); i-- > 0;) {
    SearchNode& node = *path[i].node;
    const ActionId a = path[i].action;
    const double continuation =
        i + 1 == path.size() ? leaf_return : node_value(*path[i + 1].node, prior, params);
    node.q[a] = node.reward[a] + gamma * continuation;
    ++node.visits[a];
  }
}

double rollout_return(StateId leaf_state, const DiscreteMdp& model, const PolicyTable& prior,
                      int depth_remaining, double gamma, Rng& rng, const RewardSelector& channel) {
  if (depth_remaining < 0) throw std::invalid_argument("rollout_return: negative depth");
  double total = 0.0;
  double discount = 1.0;
  StateId s = leaf_state;
  for (int k = 0; k < depth_remaining && !model.is_terminal(s); ++k) {
    const ActionId a = sample_index(prior.row(s), rng);
    total += discount * channel_reward(model, s, a, channel);
    discount *= gamma;
    s = sample_transition(model, s, a, rng);
  }
  return total;
}

namespace {

ActionId root_argmax(const SearchNode& root, const PolicyTable& prior, const MctsParams& params) {
  const auto logits = node_logits(root, prior, params);
  return static_cast<ActionId>(std::max_element(logits.begin(), logits.end()) - logits.begin());
}

// Loose sanity bound on stored values; anything beyond it means a broken
// backup rather than a large but legitimate estimate.
double value_bound(const DiscreteMdp& model, const PolicyTable& prior, const MctsParams& params) {
  double addon_max = 0.0;
  double basic_max = 0.0;
  for (double r : model.addon_rewards().values()) addon_max = std::max(addon_max, std::abs(r));
  for (double r : model.basic_rewards().values()) basic_max = std::max(basic_max, std::abs(r));
  const double r_max = addon_max + std::max(1.0, params.plain_reward.omega()) * basic_max;
  double lp_max = 0.0;
  for (double lp : prior.log_probs().values()) lp_max = std::max(lp_max, std::abs(lp));
  const double per_step = r_max + params.omega_prime * lp_max +
                          params.alpha_hat * std::log(static_cast<double>(model.n_actions()));
  // Values sum at most horizon + roll-out steps of per-step magnitude.
  return 2.0 * per_step * (params.horizon + 1) + 1.0;
}

}  // namespace

PlanResult plan(StateId root_state, const DiscreteMdp& model, const PolicyTable& prior,
                const MctsParams& params, Rng& rng) {
  params.validate();
  model.check_state(root_state);
  if (prior.n_states() != model.n_states() || prior.n_actions() != model.n_actions()) {
    throw std::invalid_argument("plan: prior shape does not match the model");
  }
  const double gamma = model.discount();
  const RewardSelector rollout_channel =
      params.mode == BackupMode::residual ? RewardSelector::addon() : params.plain_reward;
  const double bound = value_bound(model, prior, params);

  PlanResult result;
  SearchNode& root =
      result.tree.add_node(root_state, 0, model.is_terminal(root_state), edge_rewards(model, root_state, params));
  std::vector<PathStep> path;
  for (int it = 0; it < params.iter_max && !root.terminal; ++it) {
    path.clear();
    SearchNode* node = &root;
    double leaf_return = 0.0;
    while (true) {
      ActionId a;
      bool expanding = !node->fully_expanded();
      if (expanding) {
        a = node->tried++;
      } else {
        a = sample_index(tree_policy_distribution(*node, prior, params), rng);
      }
      const StateId next = sample_transition(model, node->state, a, rng);
      path.push_back({node, a});
      SearchNode* child = node->child(a, next);
      if (child == nullptr) {
        child = &result.tree.add_node(next, node->depth + 1, model.is_terminal(next),
                                      edge_rewards(model, next, params));
        node->children[a].push_back(child);
        expanding = true;
      }
      if (expanding) {
        if (!child->terminal) {
          const int remaining = params.horizon - child->depth;
          double sum = 0.0;
          for (int k = 0; k < params.rollouts; ++k) {
            sum += rollout_return(child->state, model, prior, remaining, gamma, rng, rollout_channel);
          }
          leaf_return = sum / params.rollouts;
        }
        break;
      }
      if (child->terminal || child->depth >= params.horizon) break;
      node = child;
    }
    backpropagate(path, leaf_return, prior, params, gamma);
    for (const PathStep& step : path) {
      const double q = step.node->q[step.action];
      if (!std::isfinite(q) || std::abs(q) > bound) {
        throw std::logic_error("plan: backed-up value " + std::to_string(q) + " outside the value bound");
      }
    }
    result.iterations = it + 1;
  }

  if (params.root_rule == RootActionRule::argmax) {
    result.action = root_argmax(root, prior, params);
  } else {
    MctsParams greedy = params;
    greedy.epsilon = 0.0;
    result.action = sample_index(tree_policy_distribution(root, prior, greedy), rng);
  }
  return result;
}

std::vector<double> root_policy(const PlanResult& result, const PolicyTable& prior, const MctsParams& params) {
  MctsParams greedy = params;
  greedy.epsilon = 0.0;
  return tree_policy_distribution(result.tree.root(), prior, greedy);
}

}  // namespace rqlab
