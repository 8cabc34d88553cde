#include <cmath>

#include <gtest/gtest.h>

#include "cqht/discretize.hpp"
#include "cqht/error.hpp"
#include "cqht/hypothesis.hpp"

using namespace cqht;

namespace {

double dist(const BlochVector& a, const BlochVector& b) { return 2.0 * bloch_trace_distance(a, b); }

}  // namespace

TEST(FibonacciSphere, UnitVectorsCentredAtOrigin) {
  for (int n : {1, 2, 17, 200}) {
    const auto pts = fibonacci_sphere(n);
    ASSERT_EQ(pts.size(), static_cast<std::size_t>(n));
    BlochVector mean{0, 0, 0};
    for (const auto& v : pts) {
      EXPECT_NEAR(dist(v, {0, 0, 0}), 1.0, 1e-14);
      for (int k = 0; k < 3; ++k) mean[static_cast<std::size_t>(k)] += v[static_cast<std::size_t>(k)] / n;
    }
    if (n >= 17) EXPECT_LT(dist(mean, {0, 0, 0}), 2.0 / n);
  }
  EXPECT_THROW(fibonacci_sphere(0), Error);
}

TEST(BlochNet, PointsStayInRegionAndAreStates) {
  BlochNetSpec spec;
  spec.center = {0.2, -0.1, 0.3};
  spec.radius = 0.5;
  spec.points = 40;
  spec.shells = 3;
  const BlochNet net = bloch_net(spec, 500, 1);
  ASSERT_EQ(net.bloch.size(), net.states.size());
  EXPECT_EQ(net.bloch.front(), spec.center);
  for (const auto& v : net.bloch) EXPECT_LE(dist(v, spec.center), spec.radius + 1e-12);
  for (const auto& s : net.states) EXPECT_NO_THROW(DensityMatrix{s.mat()});
}

TEST(BlochNet, PureSphereNet) {
  BlochNetSpec spec;
  spec.region = BlochRegion::Sphere;
  spec.points = 30;
  const BlochNet net = bloch_net(spec, 200, 3);
  EXPECT_EQ(net.states.size(), 30u);
  for (const auto& s : net.states) EXPECT_TRUE(s.is_pure(1e-12));
}

TEST(BlochNet, CoveringRadiusShrinksAndGrowsWithProbes) {
  BlochNetSpec spec;
  spec.radius = 0.8;
  double prev = 1.0;
  for (int pts : {8, 32, 128, 512}) {
    spec.points = pts;
    spec.shells = 2 + pts / 64;
    const double r = bloch_net(spec, 4000, 9).covering_radius;
    EXPECT_LT(r, prev) << pts;
    prev = r;
  }
  // Probe streams share a prefix, so more probes can only raise the estimate.
  spec.points = 32;
  spec.shells = 2;
  EXPECT_LE(bloch_net(spec, 100, 5).covering_radius, bloch_net(spec, 1000, 5).covering_radius);
}

TEST(BlochNet, CoveringRadiusAgainstBruteForce) {
  // Dense cubic grid over the ball: the grid's largest nearest-net distance
  // cannot exceed the estimate by more than the grid spacing.
  BlochNetSpec spec;
  spec.radius = 0.6;
  spec.points = 24;
  spec.shells = 2;
  const BlochNet net = bloch_net(spec, 20000, 11);
  const int g = 24;
  const double h = 2.0 * spec.radius / g;
  double worst = 0.0;
  for (int i = 0; i <= g; ++i) {
    for (int j = 0; j <= g; ++j) {
      for (int k = 0; k <= g; ++k) {
        const BlochVector x{-spec.radius + i * h, -spec.radius + j * h, -spec.radius + k * h};
        if (dist(x, {0, 0, 0}) > spec.radius) continue;
        double nearest = 1e9;
        for (const auto& v : net.bloch) nearest = std::min(nearest, bloch_trace_distance(x, v));
        worst = std::max(worst, nearest);
      }
    }
  }
  EXPECT_LE(net.covering_radius, worst + 0.5 * std::sqrt(3.0) * h);
  EXPECT_GE(net.covering_radius, worst - 0.5 * std::sqrt(3.0) * h);
}

TEST(BlochNet, RejectsRegionsOutsideTheBall) {
  BlochNetSpec spec;
  spec.center = {0.5, 0, 0};
  spec.radius = 0.6;
  try {
    bloch_net(spec, 10, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
  }
  spec.radius = 0.5;
  EXPECT_NO_THROW(bloch_net(spec, 10, 1));
  EXPECT_THROW(bloch_net(spec, 0, 1), Error);
}
