#pragma once

#include <span>
#include <string>
#include <vector>

#include "rqlab/rng.hpp"
#include "rqlab/table.hpp"

namespace rqlab {

struct Transition {
  StateId next;
  double prob;
};

/// Finite MDP with two reward channels: the basic reward r of the task the
/// prior policy was trained on, and the add-on reward r_R used for
/// customization. Rewards are functions of (s, a).
///
/// Built once through the mutators, then shared as `const DiscreteMdp&`.
/// Terminal states are zero-reward self-loops (see make_terminal), which
/// lets episodic tasks use the infinite-horizon discounted solvers unchanged.
class DiscreteMdp {
 public:
  DiscreteMdp(std::size_t n_states, std::size_t n_actions, double discount);

  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions() const { return n_actions_; }
  double discount() const { return discount_; }

  /// Replaces the outcome list of (s, a). Zero-probability entries are kept
  /// so that validation sees exactly what the caller wrote.
  void set_outcomes(StateId s, ActionId a, std::vector<Transition> outcomes);
  void set_rewards(StateId s, ActionId a, double basic, double addon);
  /// Marks `s` terminal and rewrites every action as a zero-reward self-loop.
  void make_terminal(StateId s);
  /// Sets the flag only. Used to build deliberately broken models.
  void set_terminal_flag(StateId s, bool terminal);

  std::span<const Transition> outcomes(StateId s, ActionId a) const {
    return outcomes_[s * n_actions_ + a];
  }
  /// Dense probability vector over next states.
  std::vector<double> transition_row(StateId s, ActionId a) const;

  double basic_reward(StateId s, ActionId a) const { return basic_(s, a); }
  double addon_reward(StateId s, ActionId a) const { return addon_(s, a); }
  const ActionTable& basic_rewards() const { return basic_; }
  const ActionTable& addon_rewards() const { return addon_; }
  bool is_terminal(StateId s) const { return terminal_[s]; }

  void check_state(StateId s) const;
  void check_action(ActionId a) const;

 private:
  std::size_t n_states_;
  std::size_t n_actions_;
  double discount_;
  std::vector<std::vector<Transition>> outcomes_;
  ActionTable basic_;
  ActionTable addon_;
  std::vector<bool> terminal_;
};

/// Which reward channel a solver sees: r, r_R, or omega * r + r_R.
class RewardSelector {
 public:
  enum class Mode { basic, addon, combined };

  static RewardSelector basic() { return RewardSelector(Mode::basic, 0.0); }
  static RewardSelector addon() { return RewardSelector(Mode::addon, 0.0); }
  /// Throws std::invalid_argument when omega < 0.
  static RewardSelector combined(double omega);

  Mode mode() const { return mode_; }
  double omega() const { return omega_; }

 private:
  RewardSelector(Mode mode, double omega) : mode_(mode), omega_(omega) {}
  Mode mode_;
  double omega_;
};

/// Reward table seen under `selector`.
ActionTable compose_reward(const DiscreteMdp& mdp, const RewardSelector& selector);

struct Violation {
  enum class Kind { row_sum, negative_probability, next_state_out_of_range, terminal_convention, discount };
  Kind kind;
  StateId state = 0;
  ActionId action = 0;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Lists every broken invariant: row sums (1e-12), negative probabilities,
/// out-of-range successors, terminal self-loop convention, discount range.
ValidationReport validate_mdp(const DiscreteMdp& mdp);

/// Draws s' ~ p(. | s, a). Out-of-range indices throw std::out_of_range.
StateId sample_transition(const DiscreteMdp& mdp, StateId s, ActionId a, Rng& rng);

/// Expected value of `values` over next states of (s, a).
double expected_next(const DiscreteMdp& mdp, StateId s, ActionId a, std::span<const double> values);

}  // namespace rqlab
