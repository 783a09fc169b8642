#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rqlab {

using StateId = std::size_t;
using ActionId = std::size_t;

/// Dense state x action table of doubles, row-major.
///
/// Backs every Q-like quantity in the library: optimal soft values, residual
/// values, reward tables, and raw probability tables.
class ActionTable {
 public:
  ActionTable() = default;
  ActionTable(std::size_t n_states, std::size_t n_actions, double fill = 0.0);

  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions() const { return n_actions_; }

  double& operator()(StateId s, ActionId a) { return values_[s * n_actions_ + a]; }
  double operator()(StateId s, ActionId a) const { return values_[s * n_actions_ + a]; }

  std::span<double> row(StateId s) { return {values_.data() + s * n_actions_, n_actions_}; }
  std::span<const double> row(StateId s) const {
    return {values_.data() + s * n_actions_, n_actions_};
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool same_shape(const ActionTable& other) const {
    return n_states_ == other.n_states_ && n_actions_ == other.n_actions_;
  }
  bool all_finite() const;

  friend bool operator==(const ActionTable&, const ActionTable&) = default;

 private:
  std::size_t n_states_ = 0;
  std::size_t n_actions_ = 0;
  std::vector<double> values_;
};

using QTable = ActionTable;

/// max |a - b| over all entries. Shapes must match.
double sup_norm_diff(const ActionTable& a, const ActionTable& b);

/// Half the L1 distance between two distributions.
double total_variation(std::span<const double> p, std::span<const double> q);

/// Per-state probability distributions with strictly positive support.
///
/// Log-probabilities are stored next to the probabilities. When a policy is
/// built from logits the logs come straight from a log-softmax, so `ln pi`
/// stays exact even where `pi` itself is tiny.
class PolicyTable {
 public:
  PolicyTable() = default;

  /// Normalizes each row of `logits / temperature` with a max-shifted softmax.
  static PolicyTable from_logits(const ActionTable& logits, double temperature,
                                 std::optional<double> temperature_meta = std::nullopt);
  /// Validates rows (sum to 1 within 1e-12, all entries > 0). Throws
  /// std::invalid_argument on violation.
  static PolicyTable from_probabilities(ActionTable probs,
                                        std::optional<double> temperature_meta = std::nullopt);
  static PolicyTable uniform(std::size_t n_states, std::size_t n_actions);

  std::size_t n_states() const { return probs_.n_states(); }
  std::size_t n_actions() const { return probs_.n_actions(); }

  double prob(StateId s, ActionId a) const { return probs_(s, a); }
  double log_prob(StateId s, ActionId a) const { return log_probs_(s, a); }
  std::span<const double> row(StateId s) const { return probs_.row(s); }
  std::span<const double> log_row(StateId s) const { return log_probs_.row(s); }

  const ActionTable& probs() const { return probs_; }
  const ActionTable& log_probs() const { return log_probs_; }
  std::optional<double> temperature() const { return temperature_; }

 private:
  ActionTable probs_;
  ActionTable log_probs_;
  std::optional<double> temperature_;
};

/// max over states of the per-state total variation.
double max_total_variation(const PolicyTable& a, const PolicyTable& b);

/// Entropy of one policy row, in nats.
double entropy(std::span<const double> probs);

}  // namespace rqlab
