#include "rqlab/fixtures.hpp"

namespace rqlab::fixtures {

DiscreteMdp bandit2() {
  DiscreteMdp mdp(2, 2, 0.0);
  constexpr StateId kTerminal = 1;
  for (ActionId a = 0; a < 2; ++a) mdp.set_outcomes(0, a, {{kTerminal, 1.0}});
  mdp.set_rewards(0, 0, 1.0, 0.0);
  mdp.set_rewards(0, 1, 0.0, 1.0);
  mdp.make_terminal(kTerminal);
  return mdp;
}

DiscreteMdp two_state_loop() {
  DiscreteMdp mdp(2, 2, 0.9);
  mdp.set_outcomes(kStateA, kActionX, {{kStateA, 1.0}});
  mdp.set_outcomes(kStateA, kActionY, {{kStateB, 1.0}});
  mdp.set_outcomes(kStateB, kActionX, {{kStateB, 1.0}});
  mdp.set_outcomes(kStateB, kActionY, {{kStateA, 1.0}});
  mdp.set_rewards(kStateA, kActionX, 1.0, 0.0);
  mdp.set_rewards(kStateA, kActionY, 0.0, 1.0);
  return mdp;
}

}  // namespace rqlab::fixtures
