#include "rqlab/envs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "rqlab/fixtures.hpp"

namespace rqlab {

namespace {

constexpr std::size_t kMaxStates = 200000;

// Merges duplicate successors and drops empty ones, keeping first-seen order.
std::vector<Transition> merge(const std::vector<Transition>& raw) {
  std::vector<Transition> out;
  for (const auto& t : raw) {
    if (t.prob <= 0.0) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const Transition& o) { return o.next == t.next; });
    if (it == out.end()) {
      out.push_back(t);
    } else {
      it->prob += t.prob;
    }
  }
  // Renormalize away accumulated rounding so rows pass the 1e-12 check.
  double total = 0.0;
  for (const auto& t : out) total += t.prob;
  for (auto& t : out) t.prob /= total;
  return out;
}

double probability_of(const std::vector<Transition>& outcomes, StateId s) {
  double p = 0.0;
  for (const auto& t : outcomes) {
    if (t.next == s) p += t.prob;
  }
  return p;
}

std::size_t state_count(const EnvSpec& spec) {
  if (spec.name == "centering-chain") {
    return static_cast<std::size_t>(2 * spec.half_width + 1) * static_cast<std::size_t>(2 * spec.lean_limit + 1) + 1;
  }
  if (spec.name == "discrete-mountain-car") {
    return static_cast<std::size_t>(spec.position_bins) * static_cast<std::size_t>(spec.velocity_bins) + 1;
  }
  if (spec.name == "grid-highway") {
    return static_cast<std::size_t>(spec.lanes) * static_cast<std::size_t>(spec.cells) * 2 + 1;
  }
  if (spec.name == "grid-parking") {
    return static_cast<std::size_t>(spec.grid_width) * static_cast<std::size_t>(spec.grid_height);
  }
  if (spec.name == "bandit-2" || spec.name == "two-state-loop") return 2;
  throw std::invalid_argument("unknown environment '" + spec.name + "'");
}

// --- centering-chain -------------------------------------------------------
//
// A cart at integer position x in [-K, K] carries a pole with integer lean
// theta in [-L, L]. Pushing by a in {-1, +1} moves the cart (clamped at the
// walls) and tilts the pole the other way; the pole also wobbles by
// xi in {-1, 0, +1} with probabilities {1/4, 1/2, 1/4}:
//   x' = clamp(x + a),  theta' = theta - a + xi.
// |theta'| > L drops the pole (failure terminal). Balancing alone leaves the
// cart wandering; the add-on asks it to stay near x = 0.

constexpr double kWobble[3] = {0.25, 0.5, 0.25};

BuiltEnv build_centering(const EnvSpec& spec) {
  const int K = spec.half_width;
  const int L = spec.lean_limit;
  const std::size_t n = state_count(spec);
  const StateId failed = n - 1;
  auto mdp = std::make_shared<DiscreteMdp>(n, 2, spec.resolved_discount());
  std::vector<TerminalKind> kinds(n, TerminalKind::none);
  for (int x = -K; x <= K; ++x) {
    for (int lean = -L; lean <= L; ++lean) {
      const StateId s = centering::encode(spec, x, lean);
      for (ActionId a = 0; a < 2; ++a) {
        const int push = a == centering::kLeft ? -1 : 1;
        const int x_next = std::clamp(x + push, -K, K);
        std::vector<Transition> raw;
        for (int k = 0; k < 3; ++k) {
          const int lean_next = lean - push + (k - 1);
          const StateId next = std::abs(lean_next) > L ? failed : centering::encode(spec, x_next, lean_next);
          raw.push_back({next, kWobble[k]});
        }
        auto outcomes = merge(raw);
        const double survive = 1.0 - probability_of(outcomes, failed);
        mdp->set_outcomes(s, a, std::move(outcomes));
        mdp->set_rewards(s, a, spec.resolved_basic_scale() * survive,
                         -spec.resolved_addon_scale() * std::abs(x) / static_cast<double>(K));
      }
    }
  }
  mdp->make_terminal(failed);
  kinds[failed] = TerminalKind::failure;

  std::vector<Transition> initial;
  if (spec.random_start) {
    const double p = 1.0 / static_cast<double>(n - 1);
    for (StateId s = 0; s + 1 < n; ++s) initial.push_back({s, p});
  } else {
    initial.push_back({centering::encode(spec, 0, 0), 1.0});
  }
  Environment env(spec.name, mdp, std::move(initial), std::move(kinds), SuccessRule::survive_to_cap,
                  spec.resolved_episode_cap());
  return {spec, std::move(env), mdp};
}

// --- discrete-mountain-car -------------------------------------------------
//
// Mountain-car dynamics on a (position, velocity) lattice. One discrete step
// holds the force for kSubsteps continuous steps, then the continuous end
// point is split over the four surrounding lattice points by bilinear
// interpolation weights. Reaching x >= kGoal ends the episode.

constexpr double kMinX = -1.2;
constexpr double kGoal = 0.5;
constexpr double kMaxSpeed = 0.07;
constexpr double kPower = 0.001;
constexpr double kGravity = 0.0025;
constexpr int kSubsteps = 3;

struct CarGrid {
  int np;
  int nv;
  double dx;
  double dv;

  double x(int i) const { return kMinX + dx * i; }
  double v(int j) const { return -kMaxSpeed + dv * j; }
  StateId index(int i, int j) const { return static_cast<StateId>(i) * nv + j; }
  StateId goal() const { return static_cast<StateId>(np) * nv; }

  // Spreads a continuous point over lattice states.
  void interpolate(double x, double v, double weight, std::vector<Transition>& out) const {
    if (x >= kGoal) {
      out.push_back({goal(), weight});
      return;
    }
    const double fx = std::clamp((x - kMinX) / dx, 0.0, static_cast<double>(np - 1));
    const double fv = std::clamp((v + kMaxSpeed) / dv, 0.0, static_cast<double>(nv - 1));
    const int i0 = std::min(static_cast<int>(fx), np - 2);
    const int j0 = std::min(static_cast<int>(fv), nv - 2);
    const double wx = fx - i0;
    const double wv = fv - j0;
    out.push_back({index(i0, j0), weight * (1 - wx) * (1 - wv)});
    out.push_back({index(i0 + 1, j0), weight * wx * (1 - wv)});
    out.push_back({index(i0, j0 + 1), weight * (1 - wx) * wv});
    out.push_back({index(i0 + 1, j0 + 1), weight * wx * wv});
  }
};

BuiltEnv build_mountain_car(const EnvSpec& spec) {
  const CarGrid grid{spec.position_bins, spec.velocity_bins, (kGoal - kMinX) / (spec.position_bins - 1),
                     2 * kMaxSpeed / (spec.velocity_bins - 1)};
  const std::size_t n = state_count(spec);
  auto mdp = std::make_shared<DiscreteMdp>(n, 3, spec.resolved_discount());
  std::vector<TerminalKind> kinds(n, TerminalKind::none);
  for (int i = 0; i < grid.np; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const StateId s = grid.index(i, j);
      for (ActionId a = 0; a < 3; ++a) {
        const double f = mountain_car::force(a);
        double x = grid.x(i);
        double v = grid.v(j);
        for (int k = 0; k < kSubsteps && x < kGoal; ++k) {
          v = std::clamp(v + kPower * f - kGravity * std::cos(3 * x), -kMaxSpeed, kMaxSpeed);
          x = std::max(x + v, kMinX);
          if (x == kMinX && v < 0) v = 0;
        }
        std::vector<Transition> raw;
        grid.interpolate(x, v, 1.0, raw);
        auto outcomes = merge(raw);
        const double reach = probability_of(outcomes, grid.goal());
        mdp->set_outcomes(s, a, std::move(outcomes));
        mdp->set_rewards(s, a, spec.resolved_basic_scale() * (100.0 * reach - 0.1 * f * f),
                         f < 0 ? -0.5 * spec.resolved_addon_scale() : 0.0);
      }
    }
  }
  mdp->make_terminal(grid.goal());
  kinds[grid.goal()] = TerminalKind::success;

  std::vector<Transition> initial;
  if (spec.random_start) {
    const double p = 1.0 / static_cast<double>(n - 1);
    for (StateId s = 0; s + 1 < n; ++s) initial.push_back({s, p});
  } else {
    // Resting somewhere in [-0.6, -0.4].
    constexpr int kPoints = 11;
    for (int k = 0; k < kPoints; ++k) grid.interpolate(-0.6 + 0.02 * k, 0.0, 1.0 / kPoints, initial);
    initial = merge(initial);
  }
  Environment env(spec.name, mdp, std::move(initial), std::move(kinds), SuccessRule::reach_goal,
                  spec.resolved_episode_cap());
  return {spec, std::move(env), mdp};
}

// --- grid-highway ----------------------------------------------------------
//
// Ego frame on a ring of `cells` cells that moves with the traffic. Scripted
// vehicles hold fixed ring cells; the ego gains one cell per step at speed 2
// and keeps its cell at speed 1. Lane changes succeed with probability 0.9.
// Entering an occupied cell is a crash (failure terminal).

constexpr double kLaneChangeSuccess = 0.9;

bool occupied(int lane, int cell) { return (cell + 2 * lane) % 4 == 3; }

BuiltEnv build_highway(const EnvSpec& spec) {
  const int lanes = spec.lanes;
  const int cells = spec.cells;
  const std::size_t n = state_count(spec);
  const StateId crash = n - 1;
  auto mdp = std::make_shared<DiscreteMdp>(n, 5, spec.resolved_discount());
  std::vector<TerminalKind> kinds(n, TerminalKind::none);
  for (int lane = 0; lane < lanes; ++lane) {
    for (int cell = 0; cell < cells; ++cell) {
      for (int speed = 1; speed <= 2; ++speed) {
        const StateId s = highway::encode(spec, lane, cell, speed);
        const double lane_bonus = 0.5 * lane / static_cast<double>(lanes - 1);
        for (ActionId a = 0; a < 5; ++a) {
          int speed_next = speed;
          int target_lane = lane;
          if (a == highway::kSwitchLeft) target_lane = std::max(lane - 1, 0);
          if (a == highway::kSwitchRight) target_lane = std::min(lane + 1, lanes - 1);
          if (a == highway::kFaster) speed_next = 2;
          if (a == highway::kSlower) speed_next = 1;
          const int cell_next = (cell + speed_next - 1) % cells;
          auto land = [&](int l) {
            return occupied(l, cell_next) ? crash : highway::encode(spec, l, cell_next, speed_next);
          };
          std::vector<Transition> raw;
          if (target_lane == lane) {
            raw.push_back({land(lane), 1.0});
          } else {
            raw.push_back({land(target_lane), kLaneChangeSuccess});
            raw.push_back({land(lane), 1.0 - kLaneChangeSuccess});
          }
          auto outcomes = merge(raw);
          const double p_crash = probability_of(outcomes, crash);
          const double basic = (1.0 - p_crash) * (1.0 + 0.4 * (speed_next - 1)) - 0.5 * p_crash;
          mdp->set_outcomes(s, a, std::move(outcomes));
          mdp->set_rewards(s, a, spec.resolved_basic_scale() * basic, spec.resolved_addon_scale() * lane_bonus);
        }
      }
    }
  }
  // Cells a vehicle holds are unreachable; give them a harmless self-loop so
  // the table stays a valid model.
  for (int lane = 0; lane < lanes; ++lane) {
    for (int cell = 0; cell < cells; ++cell) {
      if (!occupied(lane, cell)) continue;
      for (int speed = 1; speed <= 2; ++speed) {
        const StateId s = highway::encode(spec, lane, cell, speed);
        for (ActionId a = 0; a < 5; ++a) {
          mdp->set_outcomes(s, a, {{crash, 1.0}});
          mdp->set_rewards(s, a, -0.5 * spec.resolved_basic_scale(), 0.0);
        }
      }
    }
  }
  mdp->make_terminal(crash);
  kinds[crash] = TerminalKind::failure;

  std::vector<Transition> initial;
  if (spec.random_start) {
    std::vector<StateId> free;
    for (int lane = 0; lane < lanes; ++lane) {
      for (int cell = 0; cell < cells; ++cell) {
        if (occupied(lane, cell)) continue;
        for (int speed = 1; speed <= 2; ++speed) free.push_back(highway::encode(spec, lane, cell, speed));
      }
    }
    for (StateId s : free) initial.push_back({s, 1.0 / static_cast<double>(free.size())});
  } else {
    initial.push_back({highway::encode(spec, 0, 0, 1), 1.0});
  }
  Environment env(spec.name, mdp, std::move(initial), std::move(kinds), SuccessRule::survive_to_cap,
                  spec.resolved_episode_cap());
  return {spec, std::move(env), mdp};
}

// --- grid-parking ----------------------------------------------------------
//
// Row 0 is the curb row. The target slot sits at the middle column, flanked
// by painted lines, with parked cars (walls) one slot further out on each
// side; rows 0-1 form the slot depth. Moves slip sideways with probability
// 0.05 each way. Walls and the grid edge block movement. Cost is distance to
// the slot; the add-on penalizes entering a line cell.

constexpr double kSlip = 0.05;

int goal_column(const EnvSpec& spec) { return spec.grid_width / 2; }

BuiltEnv build_parking(const EnvSpec& spec) {
  const int W = spec.grid_width;
  const int H = spec.grid_height;
  const std::size_t n = state_count(spec);
  auto mdp = std::make_shared<DiscreteMdp>(n, 4, spec.resolved_discount());
  std::vector<TerminalKind> kinds(n, TerminalKind::none);
  const int gc = goal_column(spec);
  const StateId goal = parking::encode(spec, gc, 0);

  auto move = [&](int col, int row, ActionId a) {
    int c = col;
    int r = row;
    if (a == parking::kUp) --r;
    if (a == parking::kDown) ++r;
    if (a == parking::kLeft) --c;
    if (a == parking::kRight) ++c;
    if (c < 0 || c >= W || r < 0 || r >= H || parking::cell_at(spec, c, r) == parking::Cell::wall) {
      return parking::encode(spec, col, row);
    }
    return parking::encode(spec, c, r);
  };
  auto is_line = [&](StateId s) {
    return parking::cell_at(spec, static_cast<int>(s % W), static_cast<int>(s / W)) == parking::Cell::line;
  };

  for (int row = 0; row < H; ++row) {
    for (int col = 0; col < W; ++col) {
      const StateId s = parking::encode(spec, col, row);
      const auto cell = parking::cell_at(spec, col, row);
      if (cell == parking::Cell::goal) continue;
      if (cell == parking::Cell::wall) {
        // Unreachable; kept as an inert self-loop.
        for (ActionId a = 0; a < 4; ++a) mdp->set_outcomes(s, a, {{s, 1.0}});
        continue;
      }
      const double distance = std::abs(col - gc) + row;
      for (ActionId a = 0; a < 4; ++a) {
        const bool vertical = a == parking::kUp || a == parking::kDown;
        const ActionId side1 = vertical ? parking::kLeft : parking::kUp;
        const ActionId side2 = vertical ? parking::kRight : parking::kDown;
        auto outcomes = merge({{move(col, row, a), 1.0 - 2 * kSlip},
                               {move(col, row, side1), kSlip},
                               {move(col, row, side2), kSlip}});
        double p_line = 0.0;
        for (const auto& t : outcomes) {
          if (is_line(t.next)) p_line += t.prob;
        }
        mdp->set_outcomes(s, a, std::move(outcomes));
        mdp->set_rewards(s, a, -0.25 * spec.resolved_basic_scale() * distance, -spec.resolved_addon_scale() * p_line);
      }
    }
  }
  mdp->make_terminal(goal);
  kinds[goal] = TerminalKind::success;

  std::vector<Transition> initial;
  std::vector<StateId> starts;
  if (spec.random_start) {
    for (StateId s = 0; s < n; ++s) {
      const auto cell = parking::cell_at(spec, static_cast<int>(s % W), static_cast<int>(s / W));
      if (cell == parking::Cell::free) starts.push_back(s);
    }
  } else {
    for (int col = 0; col < W; ++col) starts.push_back(parking::encode(spec, col, H - 1));
  }
  for (StateId s : starts) initial.push_back({s, 1.0 / static_cast<double>(starts.size())});
  Environment env(spec.name, mdp, std::move(initial), std::move(kinds), SuccessRule::reach_goal,
                  spec.resolved_episode_cap());
  return {spec, std::move(env), mdp};
}

// --- fixtures as episodic envs ---------------------------------------------

BuiltEnv build_fixture(const EnvSpec& spec) {
  DiscreteMdp base = spec.name == "bandit-2" ? fixtures::bandit2() : fixtures::two_state_loop();
  auto mdp = std::make_shared<DiscreteMdp>(base.n_states(), base.n_actions(), spec.resolved_discount());
  for (StateId s = 0; s < base.n_states(); ++s) {
    for (ActionId a = 0; a < base.n_actions(); ++a) {
      const auto out = base.outcomes(s, a);
      mdp->set_outcomes(s, a, {out.begin(), out.end()});
      mdp->set_rewards(s, a, spec.resolved_basic_scale() * base.basic_reward(s, a),
                       spec.resolved_addon_scale() * base.addon_reward(s, a));
    }
    mdp->set_terminal_flag(s, base.is_terminal(s));
  }
  std::vector<TerminalKind> kinds(mdp->n_states(), TerminalKind::none);
  for (StateId s = 0; s < mdp->n_states(); ++s) {
    if (mdp->is_terminal(s)) kinds[s] = TerminalKind::success;
  }
  std::vector<Transition> initial;
  if (spec.random_start) {
    for (StateId s = 0; s < mdp->n_states(); ++s) {
      if (!mdp->is_terminal(s)) initial.push_back({s, 1.0});
    }
    for (auto& t : initial) t.prob /= static_cast<double>(initial.size());
  } else {
    initial.push_back({0, 1.0});
  }
  const SuccessRule rule = spec.name == "bandit-2" ? SuccessRule::reach_goal : SuccessRule::survive_to_cap;
  Environment env(spec.name, mdp, std::move(initial), std::move(kinds), rule, spec.resolved_episode_cap());
  return {spec, std::move(env), mdp};
}

}  // namespace

const std::vector<std::string>& known_env_names() {
  static const std::vector<std::string> names{"centering-chain", "discrete-mountain-car", "grid-highway",
                                              "grid-parking",    "bandit-2",              "two-state-loop"};
  return names;
}

void EnvSpec::validate() const {
  const auto& names = known_env_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw std::invalid_argument("unknown environment '" + name + "'");
  }
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  if (name == "centering-chain") {
    require(half_width >= 1 && half_width <= 10000, "half_width must lie in [1, 10000]");
    require(lean_limit >= 1 && lean_limit <= 10000, "lean_limit must lie in [1, 10000]");
  } else if (name == "discrete-mountain-car") {
    require(position_bins >= 2 && position_bins <= 10000, "position_bins must lie in [2, 10000]");
    require(velocity_bins >= 2 && velocity_bins <= 10000, "velocity_bins must lie in [2, 10000]");
  } else if (name == "grid-highway") {
    require(lanes >= 2 && lanes <= 100, "lanes must lie in [2, 100]");
    require(cells >= 4 && cells <= 10000, "cells must lie in [4, 10000]");
  } else if (name == "grid-parking") {
    require(grid_width >= 7 && grid_width <= 1000, "grid_width must lie in [7, 1000]");
    require(grid_height >= 3 && grid_height <= 1000, "grid_height must lie in [3, 1000]");
  }
  require(!episode_cap || *episode_cap >= 1, "episode_cap must be positive");
  require(!discount || (*discount >= 0.0 && *discount < 1.0), "discount must lie in [0, 1)");
  require(std::isfinite(resolved_basic_scale()) && std::isfinite(resolved_addon_scale()),
          "reward scales must be finite");
  if (state_count(*this) > kMaxStates) {
    throw std::invalid_argument("environment '" + name + "' would enumerate more than 200000 states");
  }
}

int EnvSpec::resolved_episode_cap() const {
  if (episode_cap) return *episode_cap;
  if (name == "centering-chain") return 200;
  if (name == "discrete-mountain-car") return 200;
  if (name == "grid-highway") return 40;
  if (name == "grid-parking") return 100;
  if (name == "bandit-2") return 1;
  return 50;
}

double EnvSpec::resolved_discount() const {
  if (discount) return *discount;
  if (name == "centering-chain") return 0.8;
  if (name == "discrete-mountain-car") return 0.99;
  if (name == "grid-highway") return 0.9;
  if (name == "grid-parking") return 0.95;
  if (name == "bandit-2") return 0.0;
  return 0.9;
}

double EnvSpec::resolved_basic_scale() const {
  if (basic_scale) return *basic_scale;
  return name == "centering-chain" ? 5.0 : 1.0;
}

double EnvSpec::resolved_addon_scale() const {
  if (addon_scale) return *addon_scale;
  return name == "centering-chain" ? 0.5 : 1.0;
}

BuiltEnv make_env(const EnvSpec& spec) {
  spec.validate();
  if (spec.name == "centering-chain") return build_centering(spec);
  if (spec.name == "discrete-mountain-car") return build_mountain_car(spec);
  if (spec.name == "grid-highway") return build_highway(spec);
  if (spec.name == "grid-parking") return build_parking(spec);
  return build_fixture(spec);
}

TaskMetricInfo task_metric_info(const EnvSpec& spec) {
  if (spec.name == "centering-chain") return {"e_x", MetricDirection::lower_is_better};
  if (spec.name == "discrete-mountain-car") return {"n_neg", MetricDirection::lower_is_better};
  if (spec.name == "grid-highway") return {"I_lane", MetricDirection::higher_is_better};
  if (spec.name == "grid-parking") return {"no_violation", MetricDirection::higher_is_better};
  if (spec.name == "bandit-2" || spec.name == "two-state-loop") {
    return {"addon_return", MetricDirection::higher_is_better};
  }
  throw std::invalid_argument("unknown environment '" + spec.name + "'");
}

TaskMetricValue compute_task_metric(const EpisodeTrace& trace, const EnvSpec& spec) {
  const auto info = task_metric_info(spec);
  if (trace.env_name != spec.name || trace.n_states != state_count(spec)) {
    throw std::invalid_argument("trace from '" + trace.env_name + "' does not match environment '" +
                                spec.name + "'");
  }
  const double T = static_cast<double>(trace.steps.size());
  double value = 0.0;
  if (spec.name == "centering-chain") {
    for (const auto& step : trace.steps) value += std::abs(centering::decode(spec, step.state).x);
    value = T > 0 ? value / (spec.half_width * T) : 0.0;
  } else if (spec.name == "discrete-mountain-car") {
    for (const auto& step : trace.steps) value += mountain_car::force(step.action) < 0 ? 1.0 : 0.0;
  } else if (spec.name == "grid-highway") {
    for (const auto& step : trace.steps) value += highway::decode(spec, step.state).lane;
    value = T > 0 ? value / ((spec.lanes - 1) * T) : 0.0;
  } else if (spec.name == "grid-parking") {
    auto line = [&](StateId s) {
      return parking::cell_at(spec, static_cast<int>(s % spec.grid_width),
                              static_cast<int>(s / spec.grid_width)) == parking::Cell::line;
    };
    bool violated = line(trace.final_state);
    for (const auto& step : trace.steps) violated = violated || line(step.state);
    value = violated ? 0.0 : 1.0;
  } else {
    value = trace.addon_return();
  }
  return {info.name, value};
}

namespace centering {

StateId encode(const EnvSpec& spec, int x, int lean) {
  const int K = spec.half_width;
  const int L = spec.lean_limit;
  if (std::abs(x) > K || std::abs(lean) > L) throw std::out_of_range("centering-chain coordinates out of range");
  return static_cast<StateId>(x + K) * static_cast<StateId>(2 * L + 1) + static_cast<StateId>(lean + L);
}

Decoded decode(const EnvSpec& spec, StateId s) {
  const int K = spec.half_width;
  const int L = spec.lean_limit;
  const StateId failed = static_cast<StateId>(2 * K + 1) * static_cast<StateId>(2 * L + 1);
  if (s > failed) throw std::out_of_range("centering-chain state out of range");
  if (s == failed) return {0, 0, true};
  const int width = 2 * L + 1;
  return {static_cast<int>(s / width) - K, static_cast<int>(s % width) - L, false};
}

}  // namespace centering

namespace mountain_car {

double force(ActionId a) {
  switch (a) {
    case kBackward:
      return -1.0;
    case kCoast:
      return 0.0;
    case kForward:
      return 1.0;
  }
  throw std::out_of_range("mountain-car action out of range");
}

}  // namespace mountain_car

namespace highway {

StateId encode(const EnvSpec& spec, int lane, int cell, int speed) {
  if (lane < 0 || lane >= spec.lanes || cell < 0 || cell >= spec.cells || speed < 1 || speed > 2) {
    throw std::out_of_range("grid-highway coordinates out of range");
  }
  return (static_cast<StateId>(lane) * spec.cells + cell) * 2 + (speed - 1);
}

Decoded decode(const EnvSpec& spec, StateId s) {
  const StateId crash = static_cast<StateId>(spec.lanes) * spec.cells * 2;
  if (s > crash) throw std::out_of_range("grid-highway state out of range");
  if (s == crash) return {0, 0, 1, true};
  const int speed = static_cast<int>(s % 2) + 1;
  const int rest = static_cast<int>(s / 2);
  return {rest / spec.cells, rest % spec.cells, speed, false};
}

}  // namespace highway

namespace parking {

Cell cell_at(const EnvSpec& spec, int col, int row) {
  if (col < 0 || col >= spec.grid_width || row < 0 || row >= spec.grid_height) {
    throw std::out_of_range("grid-parking coordinates out of range");
  }
  if (row > 1) return Cell::free;
  const int offset = std::abs(col - goal_column(spec));
  if (offset == 0) return row == 0 ? Cell::goal : Cell::free;
  if (offset == 2) return Cell::wall;
  if (offset == 1 || offset == 3) return Cell::line;
  return Cell::free;
}

StateId encode(const EnvSpec& spec, int col, int row) {
  if (col < 0 || col >= spec.grid_width || row < 0 || row >= spec.grid_height) {
    throw std::out_of_range("grid-parking coordinates out of range");
  }
  return static_cast<StateId>(row) * spec.grid_width + col;
}

}  // namespace parking

}  // namespace rqlab
