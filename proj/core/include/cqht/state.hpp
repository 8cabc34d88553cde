#pragma once

#include <cstddef>
#include <span>

#include "cqht/linalg.hpp"

namespace cqht {

/// Eigenvalues at or below this are treated as kernel when taking matrix
/// roots and powers (0^0 contributes nothing).
inline constexpr double kSupportCutoff = 1e-13;

/// Hermitian, positive semidefinite, unit-trace matrix. Immutable once built.
class DensityMatrix {
 public:
  /// Validates hermiticity, trace and positivity against `tol`.
  explicit DensityMatrix(const ComplexMatrix& mat, const ToleranceConfig& tol = {});

  /// Skips validation. Only for results that are states by construction
  /// (tensor powers, convex mixtures, channel outputs).
  static DensityMatrix assume_valid(ComplexMatrix mat);

  static DensityMatrix diagonal(std::span<const double> probabilities,
                                const ToleranceConfig& tol = {});
  static DensityMatrix maximally_mixed(std::size_t dim);
  /// Projector onto basis vector `index`.
  static DensityMatrix basis(std::size_t dim, std::size_t index);

  const ComplexMatrix& mat() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(mat_.rows()); }

  double purity() const;
  bool is_pure(double tol = 1e-9) const { return purity() >= 1.0 - tol; }

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix mat, Unchecked) : mat_(std::move(mat)) {}

  ComplexMatrix mat_;
};

/// Unit-norm state vector.
class PureState {
 public:
  explicit PureState(ComplexVector vec, const ToleranceConfig& tol = {});
  /// Rescales to unit norm; throws NotNormalized for the zero vector.
  static PureState normalized(ComplexVector vec);

  const ComplexVector& vec() const noexcept { return vec_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(vec_.size()); }
  DensityMatrix density() const;

 private:
  ComplexVector vec_;
};

/// max |a_ij - b_ij|
double max_entry_distance(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix matrix_sqrt(const DensityMatrix& rho, const ToleranceConfig& tol = {});

/// Uhlmann fidelity ||sqrt(rho) sqrt(sigma)||_1 (square-root convention).
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma,
                const ToleranceConfig& tol = {});
double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma,
                      const ToleranceConfig& tol = {});

/// s -> tr(rho^s sigma^(1-s)) with both spectra computed once. Powers act on
/// the supports only, so 0^0 contributes nothing.
class OverlapProfile {
 public:
  OverlapProfile(const DensityMatrix& rho, const DensityMatrix& sigma,
                 const ToleranceConfig& tol = {});
  double operator()(double s) const;

 private:
  RealVector rho_values_;
  RealVector sigma_values_;
  Eigen::MatrixXd weights_;  // |<a_i|b_j>|^2 between support eigenvectors
};

/// tr(rho^s sigma^(1-s)) with powers restricted to each support.
double holevo_overlap(const DensityMatrix& rho, const DensityMatrix& sigma, double s,
                      const ToleranceConfig& tol = {});

/// tr[(rho - gamma sigma)_+]
double hockey_stick(const DensityMatrix& rho, const DensityMatrix& sigma, double gamma,
                    const ToleranceConfig& tol = {});

/// Order-1/2 Hellinger divergence 2(1 - tr[sqrt(rho) sqrt(sigma)]).
double hellinger_half(const DensityMatrix& rho, const DensityMatrix& sigma,
                      const ToleranceConfig& tol = {});

/// Half trace distance, the hockey-stick divergence at gamma = 1.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma,
                      const ToleranceConfig& tol = {});

/// rho^{(x) n}; throws DimensionOverflow when d^n exceeds `cap`.
DensityMatrix tensor_power(const DensityMatrix& rho, int n, std::size_t cap = max_dim());

/// d^n with overflow and cap checks.
std::size_t checked_power_dim(std::size_t d, int n, std::size_t cap = max_dim());

}  // namespace cqht
