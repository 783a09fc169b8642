#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rqlab/environment.hpp"
#include "rqlab/mdp.hpp"

namespace rqlab {

/// Declarative description of one discrete task. Size fields that do not
/// apply to `name` are ignored; unset optionals take per-environment
/// defaults (see README).
///
/// Supported names:
///   centering-chain        cart on a track with a leaning pole; add-on keeps the cart centered
///   discrete-mountain-car  binned mountain car; add-on penalizes negative force
///   grid-highway           lanes x ring cells x 2 speeds with scripted traffic; add-on prefers the right lane
///   grid-parking           parking lot grid; add-on penalizes boundary-line cells
///   bandit-2, two-state-loop   the small test models from fixtures.hpp, as episodic envs
struct EnvSpec {
  std::string name = "centering-chain";

  int half_width = 5;     // centering-chain: positions -K..K
  int lean_limit = 3;     // centering-chain: pole lean -L..L
  int position_bins = 18; // discrete-mountain-car
  int velocity_bins = 14; // discrete-mountain-car
  int lanes = 3;          // grid-highway
  int cells = 10;         // grid-highway ring length
  int grid_width = 7;     // grid-parking
  int grid_height = 6;    // grid-parking

  std::optional<int> episode_cap;
  std::optional<double> discount;
  bool random_start = false;

  /// Multipliers on the basic and add-on reward tables. Unset: 5 and 0.5 on
  /// the centering chain, 1 everywhere else.
  std::optional<double> basic_scale;
  std::optional<double> addon_scale;

  /// Throws std::invalid_argument for unknown names or out-of-range sizes
  /// (including enumerations above 200000 states).
  void validate() const;
  int resolved_episode_cap() const;
  double resolved_discount() const;
  double resolved_basic_scale() const;
  double resolved_addon_scale() const;
};

const std::vector<std::string>& known_env_names();

/// Environment handle plus its exact tabular model. The handle owns a shared
/// pointer to the same model object.
struct BuiltEnv {
  EnvSpec spec;
  Environment env;
  std::shared_ptr<const DiscreteMdp> mdp;
};

BuiltEnv make_env(const EnvSpec& spec);

enum class MetricDirection { lower_is_better, higher_is_better };

struct TaskMetricInfo {
  std::string name;
  MetricDirection direction;
};

/// Name and preferred direction of the per-episode task metric:
///   centering-chain        e_x           mean |x_t| / K
///   discrete-mountain-car  n_neg         count of negative-force actions
///   grid-highway           I_lane        mean lane index / (lanes - 1)
///   grid-parking           no_violation  1 if the episode never touched a boundary cell
/// The batch mean of no_violation is the non-violation rate.
TaskMetricInfo task_metric_info(const EnvSpec& spec);

struct TaskMetricValue {
  std::string name;
  double value;
};

/// Throws std::invalid_argument when the trace was not produced by an
/// environment matching `spec`.
TaskMetricValue compute_task_metric(const EpisodeTrace& trace, const EnvSpec& spec);

// State layouts, exposed for tests and tooling.

namespace centering {
struct Decoded {
  int x;
  int lean;
  bool failed;
};
StateId encode(const EnvSpec& spec, int x, int lean);
Decoded decode(const EnvSpec& spec, StateId s);
inline constexpr ActionId kLeft = 0;
inline constexpr ActionId kRight = 1;
}  // namespace centering

namespace mountain_car {
inline constexpr ActionId kBackward = 0;  // f = -1
inline constexpr ActionId kCoast = 1;     // f = 0
inline constexpr ActionId kForward = 2;   // f = +1
double force(ActionId a);
}  // namespace mountain_car

namespace highway {
struct Decoded {
  int lane;
  int cell;
  int speed;
  bool crashed;
};
StateId encode(const EnvSpec& spec, int lane, int cell, int speed);
Decoded decode(const EnvSpec& spec, StateId s);
inline constexpr ActionId kSwitchLeft = 0;
inline constexpr ActionId kSwitchRight = 1;
inline constexpr ActionId kFaster = 2;
inline constexpr ActionId kIdle = 3;
inline constexpr ActionId kSlower = 4;
}  // namespace highway

namespace parking {
enum class Cell { free, wall, line, goal };
Cell cell_at(const EnvSpec& spec, int col, int row);
StateId encode(const EnvSpec& spec, int col, int row);
inline constexpr ActionId kUp = 0;
inline constexpr ActionId kDown = 1;
inline constexpr ActionId kLeft = 2;
inline constexpr ActionId kRight = 3;
}  // namespace parking

}  // namespace rqlab
