#include "rqlab/environment.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace rqlab {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::success:
      return "success";
    case Termination::failure:
      return "failure";
    case Termination::truncated:
      return "truncated";
  }
  return "unknown";
}

double EpisodeTrace::basic_return() const {
  double total = 0.0;
  for (const auto& s : steps) total += s.basic_reward;
  return total;
}

double EpisodeTrace::addon_return() const {
  double total = 0.0;
  for (const auto& s : steps) total += s.addon_reward;
  return total;
}

std::string EpisodeTrace::to_json_line() const {
  nlohmann::json doc;
  doc["env"] = env_name;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : steps) rows.push_back({s.state, s.action, s.basic_reward, s.addon_reward});
  doc["steps"] = std::move(rows);
  doc["final_state"] = final_state;
  doc["terminated"] = to_string(termination);
  return doc.dump();
}

Environment::Environment(std::string name, std::shared_ptr<const DiscreteMdp> mdp,
                         std::vector<Transition> initial_distribution,
                         std::vector<TerminalKind> terminal_kinds, SuccessRule success_rule,
                         int episode_cap)
    : name_(std::move(name)),
      mdp_(std::move(mdp)),
      initial_(std::move(initial_distribution)),
      terminal_kinds_(std::move(terminal_kinds)),
      success_rule_(success_rule),
      episode_cap_(episode_cap) {
  if (!mdp_) throw std::invalid_argument("Environment needs a model");
  if (episode_cap_ < 1) throw std::invalid_argument("episode_cap must be positive");
  if (terminal_kinds_.size() != mdp_->n_states()) {
    throw std::invalid_argument("terminal kinds must cover every state");
  }
  if (initial_.empty()) throw std::invalid_argument("initial distribution is empty");
  double total = 0.0;
  for (const auto& t : initial_) {
    if (t.next >= mdp_->n_states() || !(t.prob >= 0.0)) {
      throw std::invalid_argument("bad initial distribution entry");
    }
    total += t.prob;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("initial distribution must sum to 1");
}

StateId Environment::reset(Rng& rng) {
  StateId s = initial_.back().next;
  if (initial_.size() > 1) {
    const double u = uniform01(rng);
    double cumulative = 0.0;
    for (const auto& t : initial_) {
      cumulative += t.prob;
      if (u < cumulative) {
        s = t.next;
        break;
      }
    }
  } else {
    s = initial_.front().next;
  }
  return reset_to(s);
}

StateId Environment::reset_to(StateId s) {
  mdp_->check_state(s);
  state_ = s;
  started_ = true;
  done_ = mdp_->is_terminal(s);
  trace_ = EpisodeTrace{};
  trace_.env_name = name_;
  trace_.n_states = mdp_->n_states();
  trace_.final_state = s;
  trace_.termination = Termination::truncated;
  return s;
}

StepResult Environment::step(ActionId action, Rng& rng) {
  if (!started_) throw std::logic_error("Environment::step called before reset");
  if (done_) throw std::logic_error("Environment::step called on a finished episode");
  mdp_->check_action(action);
  const double basic = mdp_->basic_reward(state_, action);
  const double addon = mdp_->addon_reward(state_, action);
  const StateId next = sample_transition(*mdp_, state_, action, rng);
  trace_.steps.push_back({state_, action, basic, addon});
  state_ = next;
  trace_.final_state = next;
  if (mdp_->is_terminal(next)) {
    done_ = true;
    trace_.termination =
        terminal_kinds_[next] == TerminalKind::failure ? Termination::failure : Termination::success;
  } else if (static_cast<int>(trace_.steps.size()) >= episode_cap_) {
    done_ = true;
    trace_.termination = Termination::truncated;
  }
  return {next, basic, addon, done_};
}

bool Environment::is_success(const EpisodeTrace& trace) const {
  switch (success_rule_) {
    case SuccessRule::reach_goal:
      return trace.termination == Termination::success;
    case SuccessRule::survive_to_cap:
      return trace.termination != Termination::failure &&
             static_cast<int>(trace.steps.size()) >= episode_cap_;
  }
  return false;
}

}  // namespace rqlab
