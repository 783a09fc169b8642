#include "rqlab/serialization.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "rqlab/numerics.hpp"

namespace rqlab {

using nlohmann::json;

namespace {

json table_json(const ActionTable& table) {
  json rows = json::array();
  for (StateId s = 0; s < table.n_states(); ++s) {
    rows.push_back(std::vector<double>(table.row(s).begin(), table.row(s).end()));
  }
  return rows;
}

ActionTable table_from(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty()) {
    throw std::invalid_argument(std::string(what) + ": expected a non-empty array of arrays");
  }
  const std::size_t n_actions = rows[0].size();
  ActionTable table(rows.size(), n_actions);
  for (StateId s = 0; s < rows.size(); ++s) {
    if (!rows[s].is_array() || rows[s].size() != n_actions) {
      throw std::invalid_argument(std::string(what) + ": ragged row " + std::to_string(s));
    }
    for (ActionId a = 0; a < n_actions; ++a) {
      if (!rows[s][a].is_number()) throw std::invalid_argument(std::string(what) + ": non-numeric entry");
      table(s, a) = rows[s][a].get<double>();
    }
  }
  return table;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string mdp_to_json(const DiscreteMdp& mdp) {
  json doc;
  doc["n_states"] = mdp.n_states();
  doc["n_actions"] = mdp.n_actions();
  doc["discount"] = mdp.discount();
  json transition = json::array();
  for (StateId s = 0; s < mdp.n_states(); ++s) {
    json per_action = json::array();
    for (ActionId a = 0; a < mdp.n_actions(); ++a) per_action.push_back(mdp.transition_row(s, a));
    transition.push_back(std::move(per_action));
  }
  doc["transition"] = std::move(transition);
  doc["basic_reward"] = table_json(mdp.basic_rewards());
  doc["addon_reward"] = table_json(mdp.addon_rewards());
  std::vector<bool> terminal(mdp.n_states());
  for (StateId s = 0; s < mdp.n_states(); ++s) terminal[s] = mdp.is_terminal(s);
  doc["terminal"] = terminal;
  return doc.dump();
}

DiscreteMdp mdp_from_json(std::string_view text) {
  const json doc = parse(text);
  try {
    const auto n_states = doc.at("n_states").get<std::size_t>();
    const auto n_actions = doc.at("n_actions").get<std::size_t>();
    DiscreteMdp mdp(n_states, n_actions, doc.at("discount").get<double>());
    const auto& transition = doc.at("transition");
    if (transition.size() != n_states) throw std::invalid_argument("transition: wrong state count");
    for (StateId s = 0; s < n_states; ++s) {
      if (transition[s].size() != n_actions) throw std::invalid_argument("transition: wrong action count");
      for (ActionId a = 0; a < n_actions; ++a) {
        const auto& row = transition[s][a];
        if (row.size() != n_states) throw std::invalid_argument("transition: wrong row length");
        std::vector<Transition> outcomes;
        for (StateId next = 0; next < n_states; ++next) {
          const double p = row[next].get<double>();
          if (p != 0.0) outcomes.push_back({next, p});
        }
        mdp.set_outcomes(s, a, std::move(outcomes));
      }
    }
    const ActionTable basic = table_from(doc.at("basic_reward"), "basic_reward");
    const ActionTable addon = table_from(doc.at("addon_reward"), "addon_reward");
    if (basic.n_states() != n_states || basic.n_actions() != n_actions || !basic.same_shape(addon)) {
      throw std::invalid_argument("reward tables do not match n_states x n_actions");
    }
    for (StateId s = 0; s < n_states; ++s) {
      for (ActionId a = 0; a < n_actions; ++a) mdp.set_rewards(s, a, basic(s, a), addon(s, a));
    }
    const auto terminal = doc.at("terminal").get<std::vector<bool>>();
    if (terminal.size() != n_states) throw std::invalid_argument("terminal: wrong length");
    for (StateId s = 0; s < n_states; ++s) mdp.set_terminal_flag(s, terminal[s]);
    return mdp;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed MDP document: ") + e.what());
  }
}

std::string table_to_json(const ActionTable& table) { return table_json(table).dump(); }

ActionTable table_from_json(std::string_view text) { return table_from(parse(text), "table"); }

std::string policy_to_json(const PolicyTable& policy) { return table_json(policy.probs()).dump(); }

LoadedPolicy policy_from_json(std::string_view text) {
  ActionTable probs = table_from(parse(text), "policy");
  LoadedPolicy loaded;
  for (StateId s = 0; s < probs.n_states(); ++s) {
    double sum = 0.0;
    for (double p : probs.row(s)) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("policy row " + std::to_string(s) + " has a negative or non-finite entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw std::invalid_argument("policy row " + std::to_string(s) + " sums to " + std::to_string(sum));
    }
    double floored_sum = 0.0;
    for (double& p : probs.row(s)) {
      if (p < kMinProbability) {
        p = kMinProbability;
        ++loaded.floored_entries;
      }
      floored_sum += p;
    }
    for (double& p : probs.row(s)) p /= floored_sum;
  }
  loaded.policy = PolicyTable::from_probabilities(std::move(probs));
  return loaded;
}

}  // namespace rqlab
