#pragma once

#include <span>

namespace rqlab {

/// ln sum_i exp(x_i), shifted by max(x). Empty input is -inf.
double log_sum_exp(std::span<const double> x);

/// temperature * ln sum_i exp(x_i / temperature). The "soft max" value
/// used by every Bellman backup in the library.
double soft_maximum(std::span<const double> x, double temperature);

/// Writes softmax(x / temperature) into `out`, max-shifted, then floors every
/// entry at kMinProbability and renormalizes so the support stays positive.
void softmax(std::span<const double> x, double temperature, std::span<double> out);

/// Writes log-softmax(x / temperature) into `out`.
void log_softmax(std::span<const double> x, double temperature, std::span<double> out);

inline constexpr double kMinProbability = 1e-300;

}  // namespace rqlab
