#include "cqht/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "cqht/error.hpp"

namespace cqht {

void ToleranceConfig::validate() const {
  if (herm_tol < 0 || psd_tol < 0 || trace_tol < 0 || norm_tol < 0 || eig_tol < 0) {
    throw Error(ErrorCode::PreconditionViolated, "tolerances must be nonnegative");
  }
}

std::size_t max_dim() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("CQHT_MAX_DIM")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::size_t{4096};
  }();
  return cap;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_hermitian(const ComplexMatrix& m, double herm_tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
  }
  if (m.size() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "matrix is empty");
  }
  const double defect = hermiticity_defect(m);
  if (!(defect <= herm_tol)) {
    throw Error(ErrorCode::NotHermitian,
                "max |m - m^dagger| = " + std::to_string(defect));
  }
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

// conj(g) * z without the inf/nan handling of the library complex multiply.
inline Complex mul_conj(Complex g, Complex z) {
  return {g.real() * z.real() + g.imag() * z.imag(), g.real() * z.imag() - g.imag() * z.real()};
}

// Diagonalizes `a` in place. When `v` is non-null the accumulated unitary is
// written there so that m = V diag(a) V^dagger.
void jacobi_diagonalize(ComplexMatrix& a, ComplexMatrix* v) {
  const Eigen::Index n = a.rows();
  const double threshold = kJacobiRelativeThreshold * a.norm();
  // Entries this small cannot keep the off-diagonal norm above threshold.
  const double skip = 0.1 * threshold / static_cast<double>(std::max<Eigen::Index>(n, 1));
  if (v) v->setIdentity(n, n);

  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) return;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= skip) continue;
        const Complex phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();

        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // G = diag(1, conj(phase)) [[c, s], [-s, c]] on (p, q). Only the
        // columns are rotated; Hermiticity gives the rows.
        auto rotate = [&](Complex* cp, Complex* cq) {
          for (Eigen::Index k = 0; k < n; ++k) {
            const Complex x = cp[k];
            const Complex y = mul_conj(phase, cq[k]);
            cp[k] = c * x - s * y;
            cq[k] = s * x + c * y;
          }
        };
        rotate(a.col(p).data(), a.col(q).data());
        for (Eigen::Index k = 0; k < n; ++k) {
          a(p, k) = std::conj(a(k, p));
          a(q, k) = std::conj(a(k, q));
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;

        if (v) rotate(v->col(p).data(), v->col(q).data());
      }
    }
  }
  if (off_diagonal_norm(a) <= threshold) return;
  throw Error(ErrorCode::NoConvergence,
              "Jacobi eigensolver exceeded " + std::to_string(kJacobiMaxSweeps) + " sweeps");
}

ComplexMatrix symmetrized(const ComplexMatrix& m, const ToleranceConfig& tol) {
  require_hermitian(m, tol.herm_tol);
  return (m + m.adjoint()) * 0.5;
}

}  // namespace

EigenDecomposition eigh(const ComplexMatrix& m, const ToleranceConfig& tol) {
  ComplexMatrix a = symmetrized(m, tol);
  ComplexMatrix v;
  jacobi_diagonalize(a, &v);

  const Eigen::Index n = a.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src).real();
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

RealVector eigvalsh(const ComplexMatrix& m, const ToleranceConfig& tol) {
  ComplexMatrix a = symmetrized(m, tol);
  jacobi_diagonalize(a, nullptr);
  RealVector values = a.diagonal().real();
  std::sort(values.data(), values.data() + values.size());
  return values;
}

ComplexMatrix apply_spectral(const EigenDecomposition& eig,
                             const std::function<double(double)>& f) {
  const Eigen::Index n = eig.values.size();
  RealVector fv(n);
  for (Eigen::Index k = 0; k < n; ++k) fv(k) = f(eig.values(k));
  return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

double trace_norm(const ComplexMatrix& m, const ToleranceConfig& tol) {
  return eigvalsh(m, tol).cwiseAbs().sum();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  ComplexMatrix out(ar * br, ac * bc);
  for (Eigen::Index j = 0; j < ac; ++j) {
    for (Eigen::Index i = 0; i < ar; ++i) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

}  // namespace cqht
