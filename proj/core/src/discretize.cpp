#include "cqht/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "cqht/error.hpp"
#include "cqht/rng.hpp"

namespace cqht {

namespace {

constexpr double kBallSlack = 1e-12;
constexpr int kMaxNetPoints = 1 << 20;

BlochVector offset(const BlochNetSpec& spec, const BlochVector& dir, double r) {
  return {spec.center[0] + r * dir[0], spec.center[1] + r * dir[1], spec.center[2] + r * dir[2]};
}

double norm(const BlochVector& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

// Points on the unit Bloch sphere can sit a rounding error outside it.
BlochVector clamp_to_ball(BlochVector v) {
  const double n = norm(v);
  if (n > 1.0) {
    for (double& x : v) x /= n;
  }
  return v;
}

}  // namespace

std::vector<BlochVector> fibonacci_sphere(int count) {
  if (count < 1) throw Error(ErrorCode::PreconditionViolated, "point count must be positive");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<BlochVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    out.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return out;
}

void BlochNetSpec::validate() const {
  if (!(radius > 0.0)) throw Error(ErrorCode::PreconditionViolated, "radius must be positive");
  if (norm(center) + radius > 1.0 + kBallSlack) {
    throw Error(ErrorCode::PreconditionViolated,
                "region leaves the Bloch ball: |center| + radius = " +
                    std::to_string(norm(center) + radius));
  }
  if (points < 1 || points > kMaxNetPoints) {
    throw Error(ErrorCode::PreconditionViolated, "points must lie in [1, 2^20]");
  }
  if (region == BlochRegion::Ball && (shells < 1 || shells > 1024)) {
    throw Error(ErrorCode::PreconditionViolated, "shells must lie in [1, 1024]");
  }
}

double bloch_trace_distance(const BlochVector& a, const BlochVector& b) {
  const BlochVector d{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  return 0.5 * norm(d);
}

BlochNet bloch_net(const BlochNetSpec& spec, int probes, std::uint64_t seed) {
  spec.validate();
  if (probes < 1) throw Error(ErrorCode::PreconditionViolated, "probes must be positive");

  BlochNet net;
  if (spec.region == BlochRegion::Sphere) {
    for (const auto& dir : fibonacci_sphere(spec.points)) {
      net.bloch.push_back(offset(spec, dir, spec.radius));
    }
  } else {
    net.bloch.push_back(spec.center);
    for (int k = 1; k <= spec.shells; ++k) {
      const double frac = static_cast<double>(k) / spec.shells;
      const int count = std::max(1, static_cast<int>(std::lround(spec.points * frac * frac)));
      for (const auto& dir : fibonacci_sphere(count)) {
        net.bloch.push_back(offset(spec, dir, spec.radius * frac));
      }
    }
  }
  for (auto& v : net.bloch) {
    v = clamp_to_ball(v);
    net.states.push_back(bloch_state(v[0], v[1], v[2]));
  }

  std::mt19937_64 rng(derive_seed(seed, 0));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < probes; ++t) {
    BlochVector dir{gauss(rng), gauss(rng), gauss(rng)};
    const double n = std::max(norm(dir), std::numeric_limits<double>::min());
    for (double& x : dir) x /= n;
    const double r = spec.region == BlochRegion::Sphere
                         ? spec.radius
                         : spec.radius * std::cbrt(unit(rng));
    const BlochVector probe = offset(spec, dir, r);
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& v : net.bloch) nearest = std::min(nearest, bloch_trace_distance(probe, v));
    worst = std::max(worst, nearest);
  }
  net.covering_radius = worst;
  net.probes = probes;
  return net;
}

}  // namespace cqht
