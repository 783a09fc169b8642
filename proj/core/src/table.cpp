#include "rqlab/table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rqlab/numerics.hpp"

namespace rqlab {

ActionTable::ActionTable(std::size_t n_states, std::size_t n_actions, double fill)
    : n_states_(n_states), n_actions_(n_actions), values_(n_states * n_actions, fill) {}

bool ActionTable::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double sup_norm_diff(const ActionTable& a, const ActionTable& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("sup_norm_diff: shape mismatch");
  double gap = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) gap = std::max(gap, std::abs(av[i] - bv[i]));
  return gap;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
  return 0.5 * l1;
}

PolicyTable PolicyTable::from_logits(const ActionTable& logits, double temperature,
                                     std::optional<double> temperature_meta) {
  if (!(temperature > 0.0)) throw std::invalid_argument("policy temperature must be positive");
  if (!logits.all_finite()) throw std::invalid_argument("policy logits must be finite");
  PolicyTable policy;
  policy.probs_ = ActionTable(logits.n_states(), logits.n_actions());
  policy.log_probs_ = ActionTable(logits.n_states(), logits.n_actions());
  policy.temperature_ = temperature_meta;
  for (StateId s = 0; s < logits.n_states(); ++s) {
    softmax(logits.row(s), temperature, policy.probs_.row(s));
    log_softmax(logits.row(s), temperature, policy.log_probs_.row(s));
  }
  return policy;
}

PolicyTable PolicyTable::from_probabilities(ActionTable probs, std::optional<double> temperature_meta) {
  for (StateId s = 0; s < probs.n_states(); ++s) {
    double sum = 0.0;
    for (double p : probs.row(s)) {
      if (!(p > 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("policy row " + std::to_string(s) +
                                    " has a non-positive or non-finite entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("policy row " + std::to_string(s) + " does not sum to 1");
    }
  }
  PolicyTable policy;
  policy.log_probs_ = ActionTable(probs.n_states(), probs.n_actions());
  for (std::size_t i = 0; i < probs.values().size(); ++i) {
    policy.log_probs_.values()[i] = std::log(probs.values()[i]);
  }
  policy.probs_ = std::move(probs);
  policy.temperature_ = temperature_meta;
  return policy;
}

PolicyTable PolicyTable::uniform(std::size_t n_states, std::size_t n_actions) {
  return from_logits(ActionTable(n_states, n_actions, 0.0), 1.0);
}

double max_total_variation(const PolicyTable& a, const PolicyTable& b) {
  if (!a.probs().same_shape(b.probs())) throw std::invalid_argument("policy shape mismatch");
  double worst = 0.0;
  for (StateId s = 0; s < a.n_states(); ++s) worst = std::max(worst, total_variation(a.row(s), b.row(s)));
  return worst;
}

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace rqlab
