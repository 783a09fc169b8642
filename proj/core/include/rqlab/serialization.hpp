#pragma once

#include <string>
#include <string_view>

#include "rqlab/mdp.hpp"
#include "rqlab/table.hpp"

namespace rqlab {

// JSON documents for models and tables. Transition tensors are written dense
// and row-major: transition[s][a][s'].

std::string mdp_to_json(const DiscreteMdp& mdp);
/// Throws std::invalid_argument on malformed documents or shape mismatches.
/// Invariant violations are not checked here; run validate_mdp.
DiscreteMdp mdp_from_json(std::string_view text);

std::string table_to_json(const ActionTable& table);
ActionTable table_from_json(std::string_view text);

/// Policy documents are the probability table; temperature is not stored.
std::string policy_to_json(const PolicyTable& policy);

struct LoadedPolicy {
  PolicyTable policy;
  /// Number of entries raised to kMinProbability before renormalization.
  std::size_t floored_entries = 0;
};
/// Loads a probability table, floors entries at kMinProbability and
/// renormalizes. Rows that are negative, non-finite, or far from summing to
/// one (1e-6) are rejected.
LoadedPolicy policy_from_json(std::string_view text);

}  // namespace rqlab
