#include "rqlab/mdp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rqlab {

DiscreteMdp::DiscreteMdp(std::size_t n_states, std::size_t n_actions, double discount)
    : n_states_(n_states),
      n_actions_(n_actions),
      discount_(discount),
      outcomes_(n_states * n_actions),
      basic_(n_states, n_actions),
      addon_(n_states, n_actions),
      terminal_(n_states, false) {
  if (n_states == 0 || n_actions == 0) {
    throw std::invalid_argument("DiscreteMdp needs at least one state and one action");
  }
}

void DiscreteMdp::check_state(StateId s) const {
  if (s >= n_states_) {
    throw std::out_of_range("state " + std::to_string(s) + " out of range [0, " +
                            std::to_string(n_states_) + ")");
  }
}

void DiscreteMdp::check_action(ActionId a) const {
  if (a >= n_actions_) {
    throw std::out_of_range("action " + std::to_string(a) + " out of range [0, " +
                            std::to_string(n_actions_) + ")");
  }
}

void DiscreteMdp::set_outcomes(StateId s, ActionId a, std::vector<Transition> outcomes) {
  check_state(s);
  check_action(a);
  outcomes_[s * n_actions_ + a] = std::move(outcomes);
}

void DiscreteMdp::set_rewards(StateId s, ActionId a, double basic, double addon) {
  check_state(s);
  check_action(a);
  basic_(s, a) = basic;
  addon_(s, a) = addon;
}

void DiscreteMdp::make_terminal(StateId s) {
  check_state(s);
  terminal_[s] = true;
  for (ActionId a = 0; a < n_actions_; ++a) {
    outcomes_[s * n_actions_ + a] = {{s, 1.0}};
    basic_(s, a) = 0.0;
    addon_(s, a) = 0.0;
  }
}

void DiscreteMdp::set_terminal_flag(StateId s, bool terminal) {
  check_state(s);
  terminal_[s] = terminal;
}

std::vector<double> DiscreteMdp::transition_row(StateId s, ActionId a) const {
  std::vector<double> row(n_states_, 0.0);
  for (const auto& t : outcomes(s, a)) {
    if (t.next < n_states_) row[t.next] += t.prob;
  }
  return row;
}

RewardSelector RewardSelector::combined(double omega) {
  if (!(omega >= 0.0)) throw std::invalid_argument("combined reward weight omega must be >= 0");
  return RewardSelector(Mode::combined, omega);
}

ActionTable compose_reward(const DiscreteMdp& mdp, const RewardSelector& selector) {
  switch (selector.mode()) {
    case RewardSelector::Mode::basic:
      return mdp.basic_rewards();
    case RewardSelector::Mode::addon:
      return mdp.addon_rewards();
    case RewardSelector::Mode::combined: {
      ActionTable out(mdp.n_states(), mdp.n_actions());
      for (StateId s = 0; s < mdp.n_states(); ++s) {
        for (ActionId a = 0; a < mdp.n_actions(); ++a) {
          out(s, a) = selector.omega() * mdp.basic_reward(s, a) + mdp.addon_reward(s, a);
        }
      }
      return out;
    }
  }
  throw std::logic_error("unhandled reward selector");
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << "(s" << v.state << ", a" << v.action << "): " << v.detail << '\n';
  }
  return out.str();
}

ValidationReport validate_mdp(const DiscreteMdp& mdp) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, StateId s, ActionId a, std::string detail) {
    report.violations.push_back({kind, s, a, std::move(detail)});
  };
  if (!(mdp.discount() >= 0.0 && mdp.discount() < 1.0)) {
    add(Violation::Kind::discount, 0, 0, "discount must lie in [0, 1)");
  }
  for (StateId s = 0; s < mdp.n_states(); ++s) {
    for (ActionId a = 0; a < mdp.n_actions(); ++a) {
      double sum = 0.0;
      for (const auto& t : mdp.outcomes(s, a)) {
        if (t.next >= mdp.n_states()) {
          add(Violation::Kind::next_state_out_of_range, s, a,
              "successor " + std::to_string(t.next) + " out of range");
        }
        if (t.prob < 0.0 || !std::isfinite(t.prob)) {
          add(Violation::Kind::negative_probability, s, a,
              "probability " + std::to_string(t.prob) + " is negative or non-finite");
        }
        sum += t.prob;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        add(Violation::Kind::row_sum, s, a, "transition row sums to " + std::to_string(sum));
      }
      if (mdp.is_terminal(s)) {
        double to_self = 0.0;
        for (const auto& t : mdp.outcomes(s, a)) {
          if (t.next == s) to_self += t.prob;
        }
        const bool self_loop = to_self == 1.0;
        if (!self_loop || mdp.basic_reward(s, a) != 0.0 || mdp.addon_reward(s, a) != 0.0) {
          add(Violation::Kind::terminal_convention, s, a,
              "terminal state must be a zero-reward self-loop");
        }
      }
    }
  }
  return report;
}

StateId sample_transition(const DiscreteMdp& mdp, StateId s, ActionId a, Rng& rng) {
  mdp.check_state(s);
  mdp.check_action(a);
  const auto out = mdp.outcomes(s, a);
  if (out.empty()) throw std::logic_error("state-action pair has no outcomes");
  if (out.size() == 1) return out[0].next;
  const double u = uniform01(rng);
  double cumulative = 0.0;
  StateId last = out.back().next;
  for (const auto& t : out) {
    if (t.prob <= 0.0) continue;
    last = t.next;
    cumulative += t.prob;
    if (u < cumulative) return t.next;
  }
  return last;
}

double expected_next(const DiscreteMdp& mdp, StateId s, ActionId a, std::span<const double> values) {
  double sum = 0.0;
  for (const auto& t : mdp.outcomes(s, a)) sum += t.prob * values[t.next];
  return sum;
}

}  // namespace rqlab
