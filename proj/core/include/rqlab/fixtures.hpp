#pragma once

#include "rqlab/mdp.hpp"

namespace rqlab::fixtures {

/// One decision state s0 with actions {a0, a1}, both leading to an absorbing
/// terminal. Basic reward [1, 0], add-on reward [0, 1], discount 0.
///   state 0 = s0, state 1 = terminal
DiscreteMdp bandit2();

/// States {A, B}, actions {x, y}, deterministic:
///   (A,x)->A basic 1;  (A,y)->B add-on 1;  (B,x)->B;  (B,y)->A.
/// All other rewards are zero, discount 0.9.
DiscreteMdp two_state_loop();

inline constexpr StateId kStateA = 0;
inline constexpr StateId kStateB = 1;
inline constexpr ActionId kActionX = 0;
inline constexpr ActionId kActionY = 1;

}  // namespace rqlab::fixtures
