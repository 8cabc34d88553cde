#pragma once

#include <cstdint>
#include <random>

#include "cqht/state.hpp"

namespace cqht {

/// splitmix64 finalizer applied to (seed, stream). Stable across platforms so
/// per-restart / per-trial streams do not depend on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Haar-random pure state from a normalized complex Gaussian vector.
PureState haar_pure_state(std::size_t dim, std::mt19937_64& rng);

/// Random mixed state G G^dagger / tr(G G^dagger) with Ginibre G of the given rank.
DensityMatrix random_density_matrix(std::size_t dim, std::size_t rank, std::mt19937_64& rng);

/// Qubit state (I + r . sigma) / 2 for a Bloch vector with |r| <= 1.
DensityMatrix bloch_state(double x, double y, double z);

}  // namespace cqht
