#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rqlab/mdp.hpp"
#include "rqlab/rng.hpp"

namespace rqlab {

enum class Termination { success, failure, truncated };

const char* to_string(Termination t);

struct TraceStep {
  StateId state;
  ActionId action;
  double basic_reward;
  double addon_reward;
};

struct EpisodeTrace {
  std::string env_name;
  std::size_t n_states = 0;
  std::vector<TraceStep> steps;
  /// State reached after the last step.
  StateId final_state = 0;
  Termination termination = Termination::truncated;

  double basic_return() const;
  double addon_return() const;
  /// One JSON object per trace, no trailing newline.
  std::string to_json_line() const;
};

/// How a terminal state ends an episode.
enum class TerminalKind { none, success, failure };

/// How the basic task defines success.
enum class SuccessRule { reach_goal, survive_to_cap };

struct StepResult {
  StateId state;
  double basic_reward;
  double addon_reward;
  bool done;
};

/// Episodic simulator over an enumerated model.
///
/// Stepping samples the model's own transition kernel and emits the table
/// rewards of the (s, a) pair taken, so simulated returns and the model agree
/// by construction. Episodes end on terminal states or at `episode_cap`.
class Environment {
 public:
  Environment(std::string name, std::shared_ptr<const DiscreteMdp> mdp,
              std::vector<Transition> initial_distribution, std::vector<TerminalKind> terminal_kinds,
              SuccessRule success_rule, int episode_cap);

  const std::string& name() const { return name_; }
  const DiscreteMdp& mdp() const { return *mdp_; }
  std::shared_ptr<const DiscreteMdp> shared_mdp() const { return mdp_; }
  int episode_cap() const { return episode_cap_; }
  SuccessRule success_rule() const { return success_rule_; }
  std::span<const Transition> initial_distribution() const { return initial_; }
  TerminalKind terminal_kind(StateId s) const { return terminal_kinds_[s]; }

  StateId reset(Rng& rng);
  /// Starts an episode in `s` regardless of the initial distribution.
  StateId reset_to(StateId s);
  /// Throws std::logic_error when the episode is finished or never started.
  StepResult step(ActionId action, Rng& rng);

  bool done() const { return done_; }
  StateId state() const { return state_; }
  const EpisodeTrace& trace() const { return trace_; }

  /// Success of a finished trace under this environment's rule.
  bool is_success(const EpisodeTrace& trace) const;

 private:
  std::string name_;
  std::shared_ptr<const DiscreteMdp> mdp_;
  std::vector<Transition> initial_;
  std::vector<TerminalKind> terminal_kinds_;
  SuccessRule success_rule_;
  int episode_cap_;

  StateId state_ = 0;
  bool started_ = false;
  bool done_ = false;
  EpisodeTrace trace_;
};

}  // namespace rqlab
