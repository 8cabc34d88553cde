#include <algorithm>
#include <bit>
#include <cmath>

#include <gtest/gtest.h>

#include "cqht/error.hpp"
#include "cqht/hypothesis.hpp"
#include "cqht/oracle.hpp"
#include "cqht/rng.hpp"
#include "generators.hpp"

using namespace cqht;
using namespace cqht::testing;

namespace {

HypothesisInstance make(double p, std::vector<DensityMatrix> a, std::vector<DensityMatrix> b) {
  return HypothesisInstance(p, UncertaintySet(std::move(a)), UncertaintySet(std::move(b)));
}

template <class F>
void expect_error(ErrorCode code, F&& f) {
  try {
    f();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

// Random finite qubit instance with m1, m2 <= max_m.
HypothesisInstance random_instance(std::uint64_t property, int trial, int max_m) {
  auto rng = stream(property, static_cast<std::uint64_t>(trial));
  std::uniform_int_distribution<int> m(1, max_m);
  std::uniform_real_distribution<double> prior(0.2, 0.8);
  const int m1 = m(rng);
  const int m2 = m(rng);
  std::vector<DensityMatrix> a;
  std::vector<DensityMatrix> b;
  for (int i = 0; i < m1; ++i) a.push_back(random_state(2, rng));
  for (int i = 0; i < m2; ++i) b.push_back(random_state(2, rng));
  return make(prior(rng), std::move(a), std::move(b));
}

}  // namespace

TEST(UncertaintySet, Invariants) {
  expect_error(ErrorCode::EmptySet, [] { UncertaintySet({}); });
  expect_error(ErrorCode::DimensionMismatch,
               [] { UncertaintySet({ket0(), DensityMatrix::maximally_mixed(3)}); });
  expect_error(ErrorCode::DuplicateState, [] { UncertaintySet({ket0(), ket1(), ket0()}); });
  EXPECT_EQ(UncertaintySet::allowing_duplicates({ket0(), ket0()}).size(), 2u);
}

TEST(HypothesisInstance, Invariants) {
  expect_error(ErrorCode::PriorOutOfRange, [] { make(0.0, {ket0()}, {ket1()}); });
  expect_error(ErrorCode::PriorOutOfRange, [] { make(1.0, {ket0()}, {ket1()}); });
  expect_error(ErrorCode::DimensionMismatch,
               [] { make(0.5, {ket0()}, {DensityMatrix::maximally_mixed(3)}); });
}

TEST(Helstrom, Examples) {
  EXPECT_NEAR(helstrom_error(0.5, ket0(), ket1()).error, 0.0, 1e-15);
  auto rng = stream(20, 0);
  const DensityMatrix rho = random_state(2, rng);
  EXPECT_NEAR(helstrom_error(0.3, rho, rho).error, 0.3, 1e-12);
  EXPECT_NEAR(helstrom_error(0.5, ket0(), ket_plus()).error, (1.0 - 1.0 / std::sqrt(2.0)) / 2.0,
              1e-12);
  expect_error(ErrorCode::PriorOutOfRange, [] { helstrom_error(1.5, ket0(), ket1()); });
}

TEST(Helstrom, EffectReproducesError) {
  for (int t = 0; t < 100; ++t) {
    auto rng = stream(21, t);
    std::uniform_real_distribution<double> prior(0.05, 0.95);
    const double p = prior(rng);
    const DensityMatrix a = random_state(2, rng);
    const DensityMatrix b = random_state(2, rng);
    const HelstromSolution sol = helstrom_error(p, a, b);
    EXPECT_NEAR(sol.error, error_for_effect(p, a, b, sol.effect), 1e-9);
    EXPECT_GE(sol.error, -1e-12);
    EXPECT_LE(sol.error, 0.5 + 1e-9);
    const RealVector ev = reference_eigenvalues(sol.effect);
    EXPECT_GE(ev.minCoeff(), -1e-8);
    EXPECT_LE(ev.maxCoeff(), 1.0 + 1e-8);
  }
}

TEST(SimpleErrorN, MatchesPurePairClosedForm) {
  EXPECT_NEAR(simple_error_n(0.5, ket0(), ket_plus(), 1),
              helstrom_error(0.5, ket0(), ket_plus()).error, 1e-15);
  EXPECT_NEAR(simple_error_n(0.5, ket0(), ket_plus(), 4), (1.0 - std::sqrt(1.0 - 1.0 / 16)) / 2,
              1e-10);
  EXPECT_NEAR(simple_error_n(0.5, ket0(), ket_plus(), 5), 0.0078745, 1e-7);

  for (int t = 0; t < 50; ++t) {
    auto rng = stream(22, t);
    std::uniform_real_distribution<double> prior(0.1, 0.9);
    const double p = prior(rng);
    const PureState a = haar_pure_state(2, rng);
    const PureState b = haar_pure_state(2, rng);
    const double c = std::norm(a.vec().dot(b.vec()));
    const int n = 1 + t % 6;
    EXPECT_NEAR(simple_error_n(p, a.density(), b.density(), n), pure_pair_closed_form(p, c, n),
                1e-9)
        << "t=" << t;
  }
}

TEST(SymmetricPower, MatchesRestrictionOfTensorPower) {
  // Dicke vectors built directly in the 2^k space.
  for (int t = 0; t < 10; ++t) {
    auto rng = stream(23, t);
    const int k = 1 + t % 5;
    const ComplexMatrix m = random_state(2, rng).mat() + ComplexMatrix::Random(2, 2);
    ComplexMatrix big = m;
    for (int i = 1; i < k; ++i) big = kron(big, m);
    const Eigen::Index dim = big.rows();
    ComplexMatrix dicke = ComplexMatrix::Zero(dim, k + 1);
    for (Eigen::Index b = 0; b < dim; ++b) dicke(b, std::popcount(static_cast<unsigned>(b))) = 1.0;
    for (int j = 0; j <= k; ++j) dicke.col(j).normalize();
    const ComplexMatrix want = dicke.adjoint() * big * dicke;
    EXPECT_LT((symmetric_power(m, k) - want).cwiseAbs().maxCoeff(), 1e-12) << "k=" << k;
  }
  EXPECT_EQ(symmetric_power(ComplexMatrix::Identity(2, 2), 0).rows(), 1);
}

TEST(QubitSimpleError, AgreesWithDenseTensorPowers) {
  for (int t = 0; t < 40; ++t) {
    auto rng = stream(24, t);
    std::uniform_real_distribution<double> prior(0.1, 0.9);
    const double p = prior(rng);
    const DensityMatrix a = t % 3 == 0 ? haar_pure_state(2, rng).density() : random_state(2, rng);
    const DensityMatrix b = random_state(2, rng);
    const int n = 1 + t % 6;
    EXPECT_NEAR(qubit_simple_error_n(p, a, b, n), simple_error_n(p, a, b, n), 1e-12) << "t=" << t;
  }
}

TEST(QubitSimpleError, LargeNMatchesPureClosedForm) {
  for (int n : {20, 40}) {
    EXPECT_NEAR(qubit_simple_error_n(0.3, ket0(), ket_plus(), n),
                pure_pair_closed_form(0.3, 0.5, n), 1e-14);
  }
  // Depolarized pair: tends to 0 and never rises.
  const DensityMatrix a = bloch_state(0.0, 0.0, 0.6);
  const DensityMatrix b = bloch_state(0.6, 0.0, 0.0);
  double prev = 1.0;
  for (int n = 1; n <= 45; n += 4) {
    const double e = qubit_simple_error_n(0.5, a, b, n);
    EXPECT_LE(e, prev + 1e-14) << n;
    prev = e;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(CompositeError, SingletonEqualsSimple) {
  const auto inst = make(0.5, {ket0()}, {ket_plus()});
  for (int n = 1; n <= 4; ++n) {
    EXPECT_NEAR(composite_error_n(inst, n).error, simple_error_n(0.5, ket0(), ket_plus(), n), 1e-8);
  }
}

TEST(CompositeError, MatchesGridOracleOnTwoStateSet) {
  const auto inst = make(0.5, {ket0()}, {ket1(), diag2(0.1)});
  const HelstromSolution sol = composite_error_n(inst, 1);
  const OracleResult grid = grid_minimax(inst, 1, 0.01);
  EXPECT_EQ(grid.evaluations, 101);
  EXPECT_NEAR(sol.error, grid.value, 1e-3);
  EXPECT_LE(sol.fw_gap, SolverConfig{}.fw_gap_tol);
  ASSERT_TRUE(sol.achieving_weights.has_value());
  EXPECT_NEAR(mixture_error(inst, 1, *sol.achieving_weights), sol.error, 1e-12);
}

TEST(CompositeError, HullDominatesVerticesAndIsMonotone) {
  for (int t = 0; t < 12; ++t) {
    const auto inst = random_instance(23, t, 3);
    double prev = 1.0;
    for (int n = 1; n <= 3; ++n) {
      const HelstromSolution sol = composite_error_n(inst, n);
      EXPECT_LE(sol.fw_gap, SolverConfig{}.fw_gap_tol);
      EXPECT_LE(sol.error, prev + 1e-7) << "t=" << t << " n=" << n;
      prev = sol.error;
      for (const auto& a : inst.d1.states()) {
        for (const auto& b : inst.d2.states()) {
          EXPECT_GE(sol.error, simple_error_n(inst.p, a, b, n) - 1e-7);
        }
      }
    }
  }
}

TEST(CompositeError, FidelityCap) {
  for (int t = 0; t < 12; ++t) {
    const auto inst = random_instance(24, t, 3);
    double fmax = 0.0;
    for (const auto& a : inst.d1.states()) {
      for (const auto& b : inst.d2.states()) fmax = std::max(fmax, fidelity(a, b));
    }
    const double m = static_cast<double>(inst.d1.size() * inst.d2.size());
    for (int n = 1; n <= 3; ++n) {
      const double cap = std::sqrt(inst.p * (1 - inst.p)) * std::sqrt(m) * std::pow(fmax, n);
      EXPECT_LE(composite_error_n(inst, n).error, cap + 1e-7) << "t=" << t << " n=" << n;
    }
  }
}

TEST(CompositeError, CertifiesMaximumAtKink) {
  // One state against two: the optimum sits where an eigenvalue of the
  // Helstrom operator crosses zero, so the sign-rule supergradient never
  // certifies it. Reference from a 1e5-point scan of the weight segment.
  const auto inst = random_instance(24, 8, 3);
  ASSERT_EQ(inst.d1.size(), 1u);
  ASSERT_EQ(inst.d2.size(), 2u);
  const HelstromSolution sol = composite_error_n(inst, 2);
  EXPECT_LE(sol.fw_gap, 1e-7);
  EXPECT_NEAR(sol.error, 0.2838242624, 2e-6);
  EXPECT_NEAR(sol.achieving_weights->v[0], 0.22234, 1e-4);
  double worst = 0.0;
  const DensityMatrix a2 = tensor_power(inst.d1[0], 2);
  for (const auto& b : inst.d2.states()) {
    worst = std::max(worst, error_for_effect(inst.p, a2, tensor_power(b, 2), sol.effect));
  }
  EXPECT_GE(worst, sol.error - 1e-12);
  EXPECT_LE(worst, sol.error + sol.fw_gap + 1e-12);
}

TEST(CompositeError, DeterministicForSeed) {
  const auto inst = random_instance(25, 0, 3);
  SolverConfig cfg;
  cfg.seed = 7;
  const auto a = composite_error_n(inst, 2, cfg);
  const auto b = composite_error_n(inst, 2, cfg);
  EXPECT_EQ(a.error, b.error);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(CompositeError, GapFailureIsReported) {
  const auto inst = make(0.5, {ket0(), diag2(0.7)}, {ket_plus(), diag2(0.2), ket1()});
  SolverConfig cfg;
  cfg.fw_max_iters = 1;
  cfg.fw_gap_tol = 1e-15;
  cfg.restarts = 1;
  expect_error(ErrorCode::NoConvergence, [&] { composite_error_n(inst, 2, cfg); });
}

TEST(SolverConfig, Validates) {
  SolverConfig cfg;
  cfg.restarts = 0;
  expect_error(ErrorCode::PreconditionViolated, [&] { cfg.validate(); });
  cfg = SolverConfig{};
  cfg.fw_gap_tol = 0.0;
  expect_error(ErrorCode::PreconditionViolated, [&] { cfg.validate(); });
}

TEST(ClassifyTrivial, Examples) {
  EXPECT_EQ(classify_trivial(make(0.5, {ket0()}, {ket1()}), 0.01), TrivialKind::OrthogonalSets);
  EXPECT_EQ(classify_trivial(make(0.5, {ket0()}, {ket_plus()}), 0.6), TrivialKind::DeltaAboveHalf);
  EXPECT_EQ(classify_trivial(make(0.2, {ket0()}, {ket_plus()}), 0.25),
            TrivialKind::DeltaAbovePrior);
  EXPECT_EQ(classify_trivial(make(0.5, {ket0(), ket_plus()}, {ket_plus()}), 0.1),
            TrivialKind::Overlapping);
  EXPECT_EQ(classify_trivial(make(0.5, {ket0()}, {ket_plus()}), 0.01), TrivialKind::NonTrivial);
  // orthogonality wins over a shared-looking delta
  EXPECT_EQ(classify_trivial(make(0.5, {ket0()}, {ket1()}), 0.7), TrivialKind::OrthogonalSets);
}

TEST(SampleComplexity, Examples) {
  const auto pure = sample_complexity(make(0.5, {ket0()}, {ket_plus()}), 0.01);
  EXPECT_EQ(pure.kind, SampleComplexity::Kind::Finite);
  EXPECT_EQ(pure.n, 5);
  ASSERT_EQ(pure.errors.size(), 5u);
  EXPECT_GT(pure.errors[3], 0.01);
  EXPECT_LE(pure.errors[4], 0.01);

  const auto orth = sample_complexity(make(0.5, {ket0()}, {ket1()}), 0.2);
  EXPECT_EQ(orth.kind, SampleComplexity::Kind::Finite);
  EXPECT_EQ(orth.n, 1);
  EXPECT_EQ(orth.classification, TrivialKind::OrthogonalSets);

  const auto over = sample_complexity(make(0.5, {ket0(), ket_plus()}, {ket_plus()}), 0.05);
  EXPECT_EQ(over.kind, SampleComplexity::Kind::Infinite);
}

TEST(SampleComplexity, CapExceededCarriesLastError) {
  SolverConfig cfg;
  cfg.n_max = 3;
  const auto r = sample_complexity(make(0.5, {ket0()}, {ket_plus()}), 0.01, cfg);
  EXPECT_EQ(r.kind, SampleComplexity::Kind::CapExceeded);
  EXPECT_EQ(r.n, 3);
  EXPECT_NEAR(r.best_error, simple_error_n(0.5, ket0(), ket_plus(), 3), 1e-12);
}

TEST(SampleComplexity, DeltaSweepFromClosedForm) {
  const auto inst = make(0.5, {ket0()}, {ket_plus()});
  EXPECT_EQ(sample_complexity(inst, 0.1).n, 2);
  EXPECT_EQ(sample_complexity(inst, 0.05).n, 3);
  EXPECT_EQ(sample_complexity(inst, 0.01).n, 5);
}
