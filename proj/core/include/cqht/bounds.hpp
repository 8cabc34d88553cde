#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqht/hypothesis.hpp"

namespace cqht {

/// Pairwise divergence extrema over D1 x D2.
struct FidelityStats {
  double f_max = 0.0;
  double f_min = 0.0;
  /// inf over pairs of the Bures distance, i.e. sqrt(2 (1 - f_max)).
  double bures_min = 0.0;
  /// sup over D2 of <psi| rho |psi>; only when D1 is a single pure state.
  std::optional<double> overlap_max_psi;
  double h_half_inf = 0.0;
  double e1_inf = 0.0;
};

inline constexpr double kPurityTol = 1e-9;

FidelityStats fidelity_stats(const HypothesisInstance& inst, const ToleranceConfig& tol = {});

/// ceil(x) after snapping values within 1e-12 of an integer, clamped to >= 1.
std::int64_t snapped_ceil_at_least_one(double x);

/// The two competing terms of the fidelity/Bures lower bound.
struct LowerBoundTerms {
  double fidelity_term = 0.0;
  double bures_term = 0.0;
  double value() const { return fidelity_term > bures_term ? fidelity_term : bures_term; }
};

/// Real-valued (not ceiled) terms for a given pairwise fidelity.
/// Throws TrivialInstance unless 0 < f < 1.
LowerBoundTerms lower_bound_terms(double p, double delta, double f);

double lb_simple(double p, double delta, const DensityMatrix& rho1, const DensityMatrix& rho2,
                 const ToleranceConfig& tol = {});

/// Governed by the least distinguishable cross pair (F_max, inf d_B).
double lb_composite(const HypothesisInstance& inst, double delta,
                    const ToleranceConfig& tol = {});
LowerBoundTerms lb_composite_terms(const HypothesisInstance& inst, double delta,
                                   const ToleranceConfig& tol = {});

/// Verification bound for a singleton pure D1: ceil(ln((1-p)/delta) / -ln overlap).
std::int64_t ub_qsv(double p, double delta, double overlap_max);

/// Finite-cardinality bound ceil(ln(sqrt(m1 m2 p (1-p)) / delta) / -ln F_max).
std::int64_t ub_finite(double p, double delta, std::int64_t m1, std::int64_t m2, double f_max);

/// Result of a bound whose expression carries an inner 1-D infimum.
struct InnerOptimum {
  std::int64_t bound = 1;
  double argmin = 0.0;
  double objective = 0.0;  // the real-valued infimum before ceiling
};

inline constexpr double kQubitMarginA = 1e-6;
inline constexpr double kQubitFmaxLimit = 0.4;

/// Objective of the compact-qubit bound at parameter a.
double qubit_bound_objective(double p, double delta, double f_max, double a);

/// Compact qubit sets with F_max <= 2/5; inner infimum over
/// a in [1e-6, ln(5/2) - 1e-6]. Throws FmaxConstraintViolated.
InnerOptimum ub_infinite_qubit(double p, double delta, double f_max);

/// C(n + d^2 - 1, n), overflow-checked. Throws Overflow.
std::int64_t caratheodory_dim(std::int64_t d, std::int64_t n);

/// 2 / (d^2 + 1): below it C(n+d^2-1, d^2-1) f^n is non-increasing in n.
double fmax_monotonicity_threshold(std::int64_t d);

/// f(s) = p^s (1-p)^(1-s) tr((psi^{(x)n})^s sigma^(1-s)) on `s_grid`, where
/// `sigma2n` acts on n copies. Throws NotPure for a mixed rho1.
std::vector<double> chernoff_s_profile(double p, const DensityMatrix& rho1,
                                       const DensityMatrix& sigma2n, int n,
                                       std::span<const double> s_grid,
                                       const ToleranceConfig& tol = {});

double chernoff_objective(double p, double delta, const OverlapProfile& overlap, double s);

/// ceil(inf_s ln(p^s (1-p)^(1-s) / delta) / -ln tr(rho1^s rho2^(1-s))).
InnerOptimum ub_simple_chernoff(double p, double delta, const DensityMatrix& rho1,
                                const DensityMatrix& rho2, const ToleranceConfig& tol = {});

/// Minimizes `f` over [lo, hi]: 101-point pre-scan, then golden section in
/// the bracket around the best grid point, with endpoint checks.
template <class F>
std::pair<double, double> minimize_scalar(F&& f, double lo, double hi, double tol = 1e-9);

struct BoundReport {
  std::string instance_id;
  double delta = 0.0;
  std::map<std::string, double> lower_bounds;
  std::map<std::string, double> upper_bounds;
  std::optional<SampleComplexity> exact;
  bool consistent = false;
  FidelityStats stats;
  std::optional<double> chernoff_s;  // argmin of the simple Chernoff bound
  std::optional<double> qubit_a;     // argmin of the compact-qubit bound

  double max_lower() const;
  double min_upper() const;
};

/// Throws TrivialInstance for any instance classify_trivial does not call
/// NonTrivial.
BoundReport build_report(const HypothesisInstance& inst, double delta,
                         const SolverConfig& cfg = {}, std::string instance_id = {});

// Labels used in BoundReport maps.
namespace labels {
inline constexpr const char* kFidelity = "fidelity";
inline constexpr const char* kBures = "bures";
inline constexpr const char* kChernoff = "chernoff";
inline constexpr const char* kQsv = "qsv_overlap";
inline constexpr const char* kFinite = "finite_cardinality";
inline constexpr const char* kQubit = "compact_qubit";
}  // namespace labels

}  // namespace cqht

#include "cqht/detail/minimize_scalar.hpp"
