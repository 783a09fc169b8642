#include "rqlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rqlab {

double log_sum_exp(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double shift = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(shift)) return shift;
  double sum = 0.0;
  for (double v : x) sum += std::exp(v - shift);
  return shift + std::log(sum);
}

double soft_maximum(std::span<const double> x, double temperature) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double shift = *std::max_element(x.begin(), x.end());
  double sum = 0.0;
  for (double v : x) sum += std::exp((v - shift) / temperature);
  return shift + temperature * std::log(sum);
}

void softmax(std::span<const double> x, double temperature, std::span<double> out) {
  if (x.size() != out.size()) throw std::invalid_argument("softmax: size mismatch");
  if (x.empty()) return;
  const double shift = *std::max_element(x.begin(), x.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::exp((x[i] - shift) / temperature);
    sum += out[i];
  }
  bool floored = false;
  for (auto& p : out) {
    p /= sum;
    if (p < kMinProbability) {
      p = kMinProbability;
      floored = true;
    }
  }
  if (floored) {
    double total = 0.0;
    for (double p : out) total += p;
    for (auto& p : out) p /= total;
  }
}

void log_softmax(std::span<const double> x, double temperature, std::span<double> out) {
  if (x.size() != out.size()) throw std::invalid_argument("log_softmax: size mismatch");
  if (x.empty()) return;
  const double shift = *std::max_element(x.begin(), x.end());
  double sum = 0.0;
  for (double v : x) sum += std::exp((v - shift) / temperature);
  const double log_norm = std::log(sum);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - shift) / temperature - log_norm;
}

}  // namespace rqlab
