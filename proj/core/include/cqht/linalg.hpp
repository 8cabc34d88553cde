#pragma once

#include <complex>
#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace cqht {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical slack used when validating states and decompositions.
struct ToleranceConfig {
  double herm_tol = 1e-9;
  double psd_tol = 1e-9;
  double trace_tol = 1e-9;
  double norm_tol = 1e-9;
  double eig_tol = 1e-8;

  void validate() const;
};

/// Eigenvalues ascending; column k of `vectors` belongs to `values[k]`.
struct EigenDecomposition {
  RealVector values;
  ComplexMatrix vectors;
};

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiRelativeThreshold = 1e-12;

/// Largest Hilbert-space dimension a tensor power may reach. Defaults to
/// 4096 and can be raised through the CQHT_MAX_DIM environment variable.
std::size_t max_dim();

double hermiticity_defect(const ComplexMatrix& m);
void require_hermitian(const ComplexMatrix& m, double herm_tol);

// Cyclic complex Jacobi. Throws NotHermitian / NoConvergence.
EigenDecomposition eigh(const ComplexMatrix& m, const ToleranceConfig& tol = {});
RealVector eigvalsh(const ComplexMatrix& m, const ToleranceConfig& tol = {});

/// V f(Λ) V† for a decomposition V Λ V†.
ComplexMatrix apply_spectral(const EigenDecomposition& eig,
                             const std::function<double(double)>& f);

double trace_norm(const ComplexMatrix& m, const ToleranceConfig& tol = {});

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// tr(a b) without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace cqht
