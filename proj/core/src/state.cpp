#include "cqht/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cqht/error.hpp"

namespace cqht {

namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
}

// Eigenpairs on the support of a state; eigenvalues in [-psd_tol, 0) are
// clamped and anything at or below kSupportCutoff is discarded.
struct Support {
  RealVector values;
  ComplexMatrix vectors;
};

Support support_of(const DensityMatrix& rho, const ToleranceConfig& tol) {
  const EigenDecomposition eig = eigh(rho.mat(), tol);
  const Eigen::Index n = eig.values.size();
  if (n > 0 && eig.values(0) < -tol.psd_tol) {
    throw Error(ErrorCode::NotPositive,
                "eigenvalue " + std::to_string(eig.values(0)) + " below -psd_tol");
  }
  Eigen::Index first = 0;
  while (first < n && eig.values(first) <= kSupportCutoff) ++first;
  Support s;
  s.values = eig.values.tail(n - first);
  s.vectors = eig.vectors.rightCols(n - first);
  return s;
}

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& mat, const ToleranceConfig& tol) {
  tol.validate();
  require_hermitian(mat, tol.herm_tol);
  const double tr = mat.trace().real();
  if (!(std::abs(tr - 1.0) <= tol.trace_tol)) {
    throw Error(ErrorCode::NotUnitTrace, "trace = " + std::to_string(tr));
  }
  ComplexMatrix h = (mat + mat.adjoint()) * 0.5;
  const RealVector ev = eigvalsh(h, tol);
  if (ev(0) < -tol.psd_tol) {
    throw Error(ErrorCode::NotPositive, "smallest eigenvalue " + std::to_string(ev(0)));
  }
  mat_ = std::move(h);
}

DensityMatrix DensityMatrix::assume_valid(ComplexMatrix mat) {
  return DensityMatrix(std::move(mat), Unchecked{});
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities,
                                      const ToleranceConfig& tol) {
  const auto n = static_cast<Eigen::Index>(probabilities.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = probabilities[static_cast<std::size_t>(i)];
  return DensityMatrix(m, tol);
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return assume_valid(ComplexMatrix::Identity(n, n) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(ErrorCode::PreconditionViolated, "basis index out of range");
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return assume_valid(std::move(m));
}

double DensityMatrix::purity() const { return trace_of_product(mat_, mat_).real(); }

PureState::PureState(ComplexVector vec, const ToleranceConfig& tol) : vec_(std::move(vec)) {
  const double norm = vec_.norm();
  if (!(std::abs(norm - 1.0) <= tol.norm_tol)) {
    throw Error(ErrorCode::NotNormalized, "norm = " + std::to_string(norm));
  }
}

PureState PureState::normalized(ComplexVector vec) {
  const double norm = vec.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::NotNormalized, "cannot normalize a zero or non-finite vector");
  }
  vec /= norm;
  return PureState(std::move(vec));
}

DensityMatrix PureState::density() const {
  return DensityMatrix::assume_valid(vec_ * vec_.adjoint());
}

double max_entry_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

ComplexMatrix matrix_sqrt(const DensityMatrix& rho, const ToleranceConfig& tol) {
  const EigenDecomposition eig = eigh(rho.mat(), tol);
  if (eig.values(0) < -tol.psd_tol) {
    throw Error(ErrorCode::NotPositive,
                "eigenvalue " + std::to_string(eig.values(0)) + " below -psd_tol");
  }
  return apply_spectral(eig, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma,
                const ToleranceConfig& tol) {
  require_same_dim(rho, sigma);
  const Support a = support_of(rho, tol);
  const Support b = support_of(sigma, tol);
  // Singular values of sqrt(rho) sqrt(sigma) coincide with those of
  // diag(sqrt a) (Va^dagger Vb) diag(sqrt b), which lives on the supports only.
  const RealVector ra = a.values.cwiseSqrt();
  const RealVector rb = b.values.cwiseSqrt();
  const ComplexMatrix c = ra.asDiagonal() * (a.vectors.adjoint() * b.vectors) * rb.asDiagonal();
  const ComplexMatrix gram = c.rows() <= c.cols() ? ComplexMatrix(c * c.adjoint())
                                                  : ComplexMatrix(c.adjoint() * c);
  const RealVector ev = eigvalsh(gram, tol);
  double f = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) f += ev(i) > 0.0 ? std::sqrt(ev(i)) : 0.0;
  return std::clamp(f, 0.0, 1.0);
}

double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma,
                      const ToleranceConfig& tol) {
  return std::sqrt(2.0 * (1.0 - fidelity(rho, sigma, tol)));
}

OverlapProfile::OverlapProfile(const DensityMatrix& rho, const DensityMatrix& sigma,
                               const ToleranceConfig& tol) {
  require_same_dim(rho, sigma);
  const Support a = support_of(rho, tol);
  const Support b = support_of(sigma, tol);
  rho_values_ = a.values;
  sigma_values_ = b.values;
  weights_ = (a.vectors.adjoint() * b.vectors).cwiseAbs2();
}

double OverlapProfile::operator()(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw Error(ErrorCode::PreconditionViolated, "s must lie in [0, 1]");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < rho_values_.size(); ++i) {
    const double ai = std::pow(rho_values_(i), s);
    for (Eigen::Index j = 0; j < sigma_values_.size(); ++j) {
      total += ai * std::pow(sigma_values_(j), 1.0 - s) * weights_(i, j);
    }
  }
  return total;
}

double holevo_overlap(const DensityMatrix& rho, const DensityMatrix& sigma, double s,
                      const ToleranceConfig& tol) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw Error(ErrorCode::PreconditionViolated, "s must lie in [0, 1]");
  }
  return OverlapProfile(rho, sigma, tol)(s);
}

double hockey_stick(const DensityMatrix& rho, const DensityMatrix& sigma, double gamma,
                    const ToleranceConfig& tol) {
  require_same_dim(rho, sigma);
  if (!(gamma >= 1.0)) {
    throw Error(ErrorCode::PreconditionViolated, "hockey-stick parameter must be >= 1");
  }
  const RealVector ev = eigvalsh(rho.mat() - gamma * sigma.mat(), tol);
  double positive = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) positive += std::max(ev(i), 0.0);
  return positive;
}

double hellinger_half(const DensityMatrix& rho, const DensityMatrix& sigma,
                      const ToleranceConfig& tol) {
  return std::clamp(2.0 * (1.0 - holevo_overlap(rho, sigma, 0.5, tol)), 0.0, 2.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma,
                      const ToleranceConfig& tol) {
  require_same_dim(rho, sigma);
  return 0.5 * trace_norm(rho.mat() - sigma.mat(), tol);
}

std::size_t checked_power_dim(std::size_t d, int n, std::size_t cap) {
  if (n < 1) throw Error(ErrorCode::PreconditionViolated, "copy count must be >= 1");
  std::size_t dim = 1;
  for (int k = 0; k < n; ++k) {
    if (dim > cap / d) {
      throw Error(ErrorCode::DimensionOverflow,
                  std::to_string(d) + "^" + std::to_string(n) + " exceeds max_dim " +
                      std::to_string(cap));
    }
    dim *= d;
  }
  return dim;
}

DensityMatrix tensor_power(const DensityMatrix& rho, int n, std::size_t cap) {
  checked_power_dim(rho.dim(), n, cap);
  ComplexMatrix out = rho.mat();
  for (int k = 1; k < n; ++k) out = kron(out, rho.mat());
  return DensityMatrix::assume_valid(std::move(out));
}

}  // namespace cqht
