#include <random>

#include <benchmark/benchmark.h>

#include "cqht/hypothesis.hpp"
#include "cqht/rng.hpp"

using namespace cqht;

namespace {

ComplexMatrix random_hermitian(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return (m + m.adjoint()) * 0.5;
}

HypothesisInstance random_sets(int m1, int m2, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<DensityMatrix> a;
  std::vector<DensityMatrix> b;
  for (int i = 0; i < m1; ++i) a.push_back(random_density_matrix(2, 2, rng));
  for (int i = 0; i < m2; ++i) b.push_back(random_density_matrix(2, 2, rng));
  return HypothesisInstance(0.5, UncertaintySet(std::move(a)), UncertaintySet(std::move(b)));
}

void BM_Eigh(benchmark::State& state) {
  const ComplexMatrix m = random_hermitian(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(eigh(m));
}
BENCHMARK(BM_Eigh)->RangeMultiplier(2)->Range(4, 128)->Unit(benchmark::kMicrosecond);

void BM_Eigvalsh(benchmark::State& state) {
  const ComplexMatrix m = random_hermitian(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(eigvalsh(m));
}
BENCHMARK(BM_Eigvalsh)->RangeMultiplier(2)->Range(4, 128)->Unit(benchmark::kMicrosecond);

void BM_SimpleErrorDense(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const DensityMatrix a = random_density_matrix(2, 2, rng);
  const DensityMatrix b = random_density_matrix(2, 2, rng);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simple_error_n(0.5, a, b, n));
}
BENCHMARK(BM_SimpleErrorDense)->DenseRange(2, 7)->Unit(benchmark::kMillisecond);

void BM_SimpleErrorQubitBlocks(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const DensityMatrix a = random_density_matrix(2, 2, rng);
  const DensityMatrix b = random_density_matrix(2, 2, rng);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qubit_simple_error_n(0.5, a, b, n));
}
BENCHMARK(BM_SimpleErrorQubitBlocks)->Arg(4)->Arg(7)->Arg(12)->Arg(24)->Arg(48)
    ->Unit(benchmark::kMillisecond);

void BM_CompositeError(benchmark::State& state) {
  const auto inst = random_sets(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)),
                                4);
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(composite_error_n(inst, n).error);
}
BENCHMARK(BM_CompositeError)
    ->Args({2, 1})->Args({2, 3})->Args({3, 2})->Args({3, 4})
    ->Unit(benchmark::kMillisecond);

void BM_SampleComplexity(benchmark::State& state) {
  // Well separated caps near the poles, so n* stays small.
  const HypothesisInstance inst(
      0.5, UncertaintySet({bloch_state(0.0, 0.0, 0.9), bloch_state(0.3, 0.0, 0.85)}),
      UncertaintySet({bloch_state(0.0, 0.0, -0.9), bloch_state(0.0, 0.3, -0.85)}));
  for (auto _ : state) benchmark::DoNotOptimize(sample_complexity(inst, 0.01).n);
}
BENCHMARK(BM_SampleComplexity)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
