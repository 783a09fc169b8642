#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace rqlab {

/// The library-wide generator. mt19937_64 output is fixed by the standard, and
/// the helpers below avoid the implementation-defined std distributions, so
/// a seed reproduces the same draws on every toolchain.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Inverse-CDF draw of an index from `probs`. Falls back to the last index
/// with positive mass when rounding leaves u above the cumulative sum.
std::size_t sample_index(std::span<const double> probs, Rng& rng);

/// Uniform integer in [0, n).
std::size_t uniform_index(std::size_t n, Rng& rng);

/// Derives an independent stream seed from a base seed and a salt.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

}  // namespace rqlab
