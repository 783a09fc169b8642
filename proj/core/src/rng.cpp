#include "rqlab/rng.hpp"

#include <stdexcept>

namespace rqlab {

std::size_t sample_index(std::span<const double> probs, Rng& rng) {
  if (probs.empty()) throw std::invalid_argument("sample_index: empty distribution");
  const double u = uniform01(rng);
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = i;
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return last_positive;
}

std::size_t uniform_index(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  // Multiply-shift on 53 bits; bias is below 2^-40 for the sizes used here.
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace rqlab
