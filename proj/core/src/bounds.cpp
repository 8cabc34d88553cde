#include "cqht/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cqht/error.hpp"

namespace cqht {

namespace {

constexpr double kSnapTol = 1e-12;
constexpr double kFidelityEdge = 1e-12;

void require_unit_interval(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0)) {
    throw Error(ErrorCode::PreconditionViolated, std::string(name) + " must lie in (0, 1)");
  }
}

void require_prior_delta(double p, double delta) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::PriorOutOfRange, "prior must lie in (0, 1)");
  require_unit_interval(delta, "delta");
}

}  // namespace

FidelityStats fidelity_stats(const HypothesisInstance& inst, const ToleranceConfig& tol) {
  FidelityStats st;
  st.f_max = 0.0;
  st.f_min = 1.0;
  st.h_half_inf = std::numeric_limits<double>::infinity();
  st.e1_inf = std::numeric_limits<double>::infinity();
  for (const auto& a : inst.d1.states()) {
    for (const auto& b : inst.d2.states()) {
      const double f = fidelity(a, b, tol);
      st.f_max = std::max(st.f_max, f);
      st.f_min = std::min(st.f_min, f);
      st.h_half_inf = std::min(st.h_half_inf, hellinger_half(a, b, tol));
      st.e1_inf = std::min(st.e1_inf, trace_distance(a, b, tol));
    }
  }
  st.bures_min = std::sqrt(std::max(0.0, 2.0 * (1.0 - st.f_max)));

  if (inst.d1.size() == 1 && inst.d1[0].is_pure(kPurityTol)) {
    double best = 0.0;
    for (const auto& b : inst.d2.states()) {
      best = std::max(best, trace_of_product(inst.d1[0].mat(), b.mat()).real());
    }
    st.overlap_max_psi = std::clamp(best, 0.0, 1.0);
  }
  return st;
}

std::int64_t snapped_ceil_at_least_one(double x) {
  if (std::isnan(x)) throw Error(ErrorCode::PreconditionViolated, "bound evaluated to NaN");
  if (x <= 1.0) return 1;
  if (!(x < 9.0e18)) throw Error(ErrorCode::Overflow, "bound does not fit a 64-bit integer");
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= kSnapTol) x = nearest;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(x)));
}

LowerBoundTerms lower_bound_terms(double p, double delta, double f) {
  require_prior_delta(p, delta);
  if (!(f > kFidelityEdge && f < 1.0 - kFidelityEdge)) {
    throw Error(ErrorCode::TrivialInstance,
                "lower bound needs fidelity strictly inside (0, 1), got " + std::to_string(f));
  }
  const double pq = p * (1.0 - p);
  LowerBoundTerms t;
  t.fidelity_term = std::log(pq / delta) / (-2.0 * std::log(f));
  t.bures_term = (1.0 - delta * (1.0 - delta) / pq) / (2.0 * (1.0 - f));
  return t;
}

double lb_simple(double p, double delta, const DensityMatrix& rho1, const DensityMatrix& rho2,
                 const ToleranceConfig& tol) {
  return lower_bound_terms(p, delta, fidelity(rho1, rho2, tol)).value();
}

LowerBoundTerms lb_composite_terms(const HypothesisInstance& inst, double delta,
                                   const ToleranceConfig& tol) {
  return lower_bound_terms(inst.p, delta, fidelity_stats(inst, tol).f_max);
}

double lb_composite(const HypothesisInstance& inst, double delta, const ToleranceConfig& tol) {
  return lb_composite_terms(inst, delta, tol).value();
}

std::int64_t ub_qsv(double p, double delta, double overlap_max) {
  require_prior_delta(p, delta);
  if (!(overlap_max > 0.0 && overlap_max < 1.0)) {
    throw Error(ErrorCode::OverlapDegenerate,
                "overlap must lie strictly inside (0, 1), got " + std::to_string(overlap_max));
  }
  return snapped_ceil_at_least_one(std::log((1.0 - p) / delta) / -std::log(overlap_max));
}

std::int64_t ub_finite(double p, double delta, std::int64_t m1, std::int64_t m2, double f_max) {
  require_prior_delta(p, delta);
  if (m1 < 1 || m2 < 1) throw Error(ErrorCode::PreconditionViolated, "set sizes must be >= 1");
  if (!(f_max > 0.0 && f_max < 1.0)) {
    throw Error(ErrorCode::TrivialInstance, "F_max must lie strictly inside (0, 1)");
  }
  const double mm = static_cast<double>(m1) * static_cast<double>(m2);
  const double num = std::log(std::sqrt(mm * p * (1.0 - p)) / delta);
  return snapped_ceil_at_least_one(num / -std::log(f_max));
}

double qubit_bound_objective(double p, double delta, double f_max, double a) {
  const double lead = std::log(std::sqrt(p * (1.0 - p)) / delta);
  // ln(9 e^{3(a-1)} / (2 a^3))
  const double poly = std::log(4.5) + 3.0 * (a - 1.0) - 3.0 * std::log(a);
  return (lead + poly) / (-std::log(f_max) - a);
}

InnerOptimum ub_infinite_qubit(double p, double delta, double f_max) {
  require_prior_delta(p, delta);
  if (!(f_max > 0.0)) throw Error(ErrorCode::TrivialInstance, "F_max must be positive");
  if (f_max > kQubitFmaxLimit + 1e-12) {
    throw Error(ErrorCode::FmaxConstraintViolated,
                "F_max = " + std::to_string(f_max) + " exceeds 2/5");
  }
  const double lo = kQubitMarginA;
  const double hi = std::log(2.5) - kQubitMarginA;
  const auto [a, value] = minimize_scalar(
      [&](double x) { return qubit_bound_objective(p, delta, f_max, x); }, lo, hi);
  InnerOptimum out;
  out.argmin = a;
  out.objective = value;
  out.bound = snapped_ceil_at_least_one(value);
  return out;
}

__extension__ typedef unsigned __int128 Wide;

std::int64_t caratheodory_dim(std::int64_t d, std::int64_t n) {
  if (d < 2 || n < 1) throw Error(ErrorCode::PreconditionViolated, "need d >= 2 and n >= 1");
  if (d > 3037000499LL) throw Error(ErrorCode::Overflow, "d^2 overflows");
  const std::int64_t top = n + d * d - 1;
  if (top < n) throw Error(ErrorCode::Overflow, "n + d^2 - 1 overflows");
  const std::int64_t k = std::min(n, d * d - 1);
  Wide r = 1;
  constexpr auto kMax = static_cast<Wide>(std::numeric_limits<std::int64_t>::max());
  for (std::int64_t i = 1; i <= k; ++i) {
    // C(top - k + i, i) = C(top - k + i - 1, i - 1) * (top - k + i) / i, exact.
    r = r * static_cast<Wide>(top - k + i) / static_cast<Wide>(i);
    if (r > kMax) throw Error(ErrorCode::Overflow, "binomial coefficient exceeds int64");
  }
  return static_cast<std::int64_t>(r);
}

double fmax_monotonicity_threshold(std::int64_t d) {
  if (d < 2) throw Error(ErrorCode::PreconditionViolated, "need d >= 2");
  const double dd = static_cast<double>(d);
  return 2.0 / (dd * dd + 1.0);
}

std::vector<double> chernoff_s_profile(double p, const DensityMatrix& rho1,
                                       const DensityMatrix& sigma2n, int n,
                                       std::span<const double> s_grid,
                                       const ToleranceConfig& tol) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::PriorOutOfRange, "prior must lie in (0, 1)");
  if (!rho1.is_pure(kPurityTol)) throw Error(ErrorCode::NotPure, "first state must be pure");
  const DensityMatrix psi_n = tensor_power(rho1, n);
  const OverlapProfile overlap(psi_n, sigma2n, tol);
  std::vector<double> out;
  out.reserve(s_grid.size());
  for (const double s : s_grid) {
    out.push_back(std::pow(p, s) * std::pow(1.0 - p, 1.0 - s) * overlap(s));
  }
  return out;
}

double chernoff_objective(double p, double delta, const OverlapProfile& overlap, double s) {
  const double num = s * std::log(p) + (1.0 - s) * std::log(1.0 - p) - std::log(delta);
  if (num <= 0.0) return 0.0;
  const double q = overlap(s);
  if (!(q < 1.0)) return std::numeric_limits<double>::infinity();
  return num / -std::log(q);
}

InnerOptimum ub_simple_chernoff(double p, double delta, const DensityMatrix& rho1,
                                const DensityMatrix& rho2, const ToleranceConfig& tol) {
  require_prior_delta(p, delta);
  if (max_entry_distance(rho1.mat(), rho2.mat()) <= kDuplicateTol) {
    throw Error(ErrorCode::TrivialInstance, "states coincide");
  }
  if (trace_of_product(rho1.mat(), rho2.mat()).real() <= kOrthogonalityTol) {
    throw Error(ErrorCode::TrivialInstance, "states have orthogonal supports");
  }
  const OverlapProfile overlap(rho1, rho2, tol);
  const auto [s, value] = minimize_scalar(
      [&](double x) { return chernoff_objective(p, delta, overlap, x); }, 0.0, 1.0);
  InnerOptimum out;
  out.argmin = s;
  out.objective = value;
  out.bound = snapped_ceil_at_least_one(value);
  return out;
}

double BoundReport::max_lower() const {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& [label, x] : lower_bounds) v = std::max(v, x);
  return v;
}

double BoundReport::min_upper() const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& [label, x] : upper_bounds) v = std::min(v, x);
  return v;
}

BoundReport build_report(const HypothesisInstance& inst, double delta, const SolverConfig& cfg,
                         std::string instance_id) {
  require_prior_delta(inst.p, delta);
  const TrivialKind kind = classify_trivial(inst, delta);
  if (kind != TrivialKind::NonTrivial) {
    throw Error(ErrorCode::TrivialInstance, std::string(to_string(kind)));
  }

  BoundReport r;
  r.instance_id = std::move(instance_id);
  r.delta = delta;
  r.stats = fidelity_stats(inst, cfg.tol);

  const LowerBoundTerms lower = lower_bound_terms(inst.p, delta, r.stats.f_max);
  r.lower_bounds[labels::kFidelity] = lower.fidelity_term;
  r.lower_bounds[labels::kBures] = lower.bures_term;

  if (inst.d1.size() == 1 && inst.d2.size() == 1) {
    const InnerOptimum ch = ub_simple_chernoff(inst.p, delta, inst.d1[0], inst.d2[0], cfg.tol);
    r.upper_bounds[labels::kChernoff] = static_cast<double>(ch.bound);
    r.chernoff_s = ch.argmin;
  }
  if (r.stats.overlap_max_psi && *r.stats.overlap_max_psi > 0.0 &&
      *r.stats.overlap_max_psi < 1.0) {
    r.upper_bounds[labels::kQsv] =
        static_cast<double>(ub_qsv(inst.p, delta, *r.stats.overlap_max_psi));
  }
  r.upper_bounds[labels::kFinite] = static_cast<double>(
      ub_finite(inst.p, delta, static_cast<std::int64_t>(inst.d1.size()),
                static_cast<std::int64_t>(inst.d2.size()), r.stats.f_max));
  if (inst.dim() == 2 && r.stats.f_max <= kQubitFmaxLimit) {
    const InnerOptimum q = ub_infinite_qubit(inst.p, delta, r.stats.f_max);
    r.upper_bounds[labels::kQubit] = static_cast<double>(q.bound);
    r.qubit_a = q.argmin;
  }

  r.exact = sample_complexity(inst, delta, cfg);
  switch (r.exact->kind) {
    case SampleComplexity::Kind::Finite: {
      const double n = static_cast<double>(r.exact->n);
      r.consistent = r.max_lower() <= n + 1e-9 && n <= r.min_upper();
      break;
    }
    case SampleComplexity::Kind::CapExceeded:
      // n* exceeds the scanned range, so every upper bound must too.
      r.consistent = r.min_upper() > static_cast<double>(r.exact->n);
      break;
    case SampleComplexity::Kind::Infinite:
      r.consistent = false;
      break;
  }
  return r;
}

}  // namespace cqht
