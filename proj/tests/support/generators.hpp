#pragma once

// Seeded generators for property tests. Each property draws from its own
// stream so adding a case elsewhere never shifts another test's samples.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cqht/rng.hpp"
#include "cqht/state.hpp"

namespace cqht::testing {

inline std::mt19937_64 stream(std::uint64_t property, std::uint64_t trial) {
  return std::mt19937_64(derive_seed(0xC0FFEEULL + property, trial));
}

inline ComplexMatrix random_hermitian(std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return 0.5 * (m + m.adjoint());
}

inline DensityMatrix random_state(std::size_t d, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> rank(1, d);
  return random_density_matrix(d, rank(rng), rng);
}

inline DensityMatrix random_pure(std::size_t d, std::mt19937_64& rng) {
  return haar_pure_state(d, rng).density();
}

// Reference spectrum from Eigen, used only as an oracle for the Jacobi solver.
inline RealVector reference_eigenvalues(const ComplexMatrix& m) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

inline double reference_trace_norm(const ComplexMatrix& m) {
  return reference_eigenvalues(m).cwiseAbs().sum();
}

inline DensityMatrix ket0() { return DensityMatrix::basis(2, 0); }
inline DensityMatrix ket1() { return DensityMatrix::basis(2, 1); }
inline DensityMatrix ket_plus() { return bloch_state(1.0, 0.0, 0.0); }
inline DensityMatrix diag2(double a) {
  const std::vector<double> pr{a, 1.0 - a};
  return DensityMatrix::diagonal(pr);
}

}  // namespace cqht::testing
