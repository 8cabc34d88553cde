#include "cqht/rng.hpp"

#include <cmath>

#include "cqht/error.hpp"

namespace cqht {

PureState haar_pure_state(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = Complex(re, im);
  }
  return PureState::normalized(std::move(v));
}

DensityMatrix random_density_matrix(std::size_t dim, std::size_t rank, std::mt19937_64& rng) {
  if (rank == 0 || rank > dim) {
    throw Error(ErrorCode::PreconditionViolated, "rank must lie in [1, dim]");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto d = static_cast<Eigen::Index>(dim);
  const auto r = static_cast<Eigen::Index>(rank);
  ComplexMatrix g(d, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  }
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  m = (m + m.adjoint()) * 0.5;
  return DensityMatrix::assume_valid(std::move(m));
}

DensityMatrix bloch_state(double x, double y, double z) {
  const double r = std::sqrt(x * x + y * y + z * z);
  if (r > 1.0 + 1e-12) {
    throw Error(ErrorCode::PreconditionViolated, "Bloch vector longer than 1");
  }
  ComplexMatrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + z);
  m(1, 1) = 0.5 * (1.0 - z);
  m(0, 1) = Complex(0.5 * x, -0.5 * y);
  m(1, 0) = Complex(0.5 * x, 0.5 * y);
  return DensityMatrix::assume_valid(std::move(m));
}

}  // namespace cqht
