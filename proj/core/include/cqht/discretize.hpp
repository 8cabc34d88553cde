#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cqht/state.hpp"

namespace cqht {

using BlochVector = std::array<double, 3>;

/// `count` nearly uniform unit vectors on a golden-angle spiral.
std::vector<BlochVector> fibonacci_sphere(int count);

enum class BlochRegion { Ball, Sphere };

/// A ball (or its boundary sphere) inside the Bloch ball.
struct BlochNetSpec {
  BlochVector center{0.0, 0.0, 0.0};
  double radius = 1.0;
  BlochRegion region = BlochRegion::Ball;
  /// Points on the outermost shell; shell k of `shells` gets about
  /// points * (k / shells)^2. Ball nets also contain the center.
  int points = 64;
  int shells = 4;

  void validate() const;
};

struct BlochNet {
  std::vector<BlochVector> bloch;
  std::vector<DensityMatrix> states;
  /// Largest trace distance from a probe point of the region to the net.
  /// A Monte Carlo estimate, so it can only undershoot the true radius.
  double covering_radius = 0.0;
  int probes = 0;
};

BlochNet bloch_net(const BlochNetSpec& spec, int probes, std::uint64_t seed);

/// Trace distance of two qubit states is half the Euclidean Bloch distance.
double bloch_trace_distance(const BlochVector& a, const BlochVector& b);

}  // namespace cqht
