#include "cqht/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "cqht/error.hpp"
#include "cqht/rng.hpp"

namespace cqht {

namespace {

constexpr double kHellingerSlack = 1e-12;
constexpr double kZeroDivergence = 1e-12;
// e^eps overflows double beyond ~709; the channel is the identity long before.
constexpr double kEpsilonCeiling = 700.0;

void require_epsilon(double epsilon) {
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::PreconditionViolated, "epsilon must be >= 0");
}

}  // namespace

std::string_view to_string(ChannelKind kind) noexcept {
  switch (kind) {
    case ChannelKind::Depolarizing: return "depolarizing";
  }
  return "unknown";
}

double minimal_depolarizing_q(double epsilon, std::size_t dim) {
  require_epsilon(epsilon);
  const double d = static_cast<double>(dim);
  const double gamma = std::exp(std::min(epsilon, kEpsilonCeiling));
  return d / (gamma + d - 1.0);
}

DpChannelSpec DpChannelSpec::depolarizing(double epsilon, std::size_t dim) {
  return depolarizing_with_q(epsilon, minimal_depolarizing_q(epsilon, dim), dim);
}

DpChannelSpec DpChannelSpec::depolarizing_with_q(double epsilon, double q, std::size_t dim) {
  DpChannelSpec s;
  s.kind = ChannelKind::Depolarizing;
  s.epsilon = epsilon;
  s.q = q;
  s.dim = dim;
  s.validate();
  return s;
}

void DpChannelSpec::validate() const {
  require_epsilon(epsilon);
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::PreconditionViolated, "q must lie in [0, 1]");
  if (dim < 1) throw Error(ErrorCode::PreconditionViolated, "channel dimension must be >= 1");
}

DensityMatrix apply_channel(const DpChannelSpec& spec, const DensityMatrix& rho) {
  if (rho.dim() != spec.dim) {
    throw Error(ErrorCode::DimensionMismatch, "channel acts on dimension " +
                                                  std::to_string(spec.dim) + ", state has " +
                                                  std::to_string(rho.dim()));
  }
  const auto d = static_cast<Eigen::Index>(spec.dim);
  ComplexMatrix out = (1.0 - spec.q) * rho.mat();
  out += (spec.q / static_cast<double>(spec.dim)) * ComplexMatrix::Identity(d, d);
  return DensityMatrix::assume_valid(std::move(out));
}

PrivateInstance privatize(const HypothesisInstance& inst, const DpChannelSpec& spec) {
  auto map_set = [&](const UncertaintySet& set) {
    std::vector<DensityMatrix> out;
    out.reserve(set.size());
    for (const auto& s : set.states()) out.push_back(apply_channel(spec, s));
    return UncertaintySet::allowing_duplicates(std::move(out));
  };
  return PrivateInstance{inst, spec, HypothesisInstance(inst.p, map_set(inst.d1), map_set(inst.d2))};
}

LdpCertificate verify_ldp(const DpChannelSpec& spec, int trial_pairs, std::uint64_t seed) {
  spec.validate();
  if (trial_pairs < 1) throw Error(ErrorCode::PreconditionViolated, "trial_pairs must be >= 1");
  const double gamma = std::exp(std::min(spec.epsilon, kEpsilonCeiling));

  LdpCertificate cert;
  auto check = [&](const DensityMatrix& a, const DensityMatrix& b) {
    const DensityMatrix ma = apply_channel(spec, a);
    const DensityMatrix mb = apply_channel(spec, b);
    cert.max_divergence = std::max(cert.max_divergence, hockey_stick(ma, mb, gamma));
    cert.max_divergence = std::max(cert.max_divergence, hockey_stick(mb, ma, gamma));
  };

  if (spec.dim >= 2) check(DensityMatrix::basis(spec.dim, 0), DensityMatrix::basis(spec.dim, 1));
  for (int t = 0; t < trial_pairs; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const DensityMatrix a = haar_pure_state(spec.dim, rng).density();
    const DensityMatrix b = haar_pure_state(spec.dim, rng).density();
    check(a, b);
  }
  cert.resolution = 16.0 * static_cast<double>(spec.dim) *
                    std::numeric_limits<double>::epsilon() * (gamma + 1.0);
  cert.passes =
      cert.resolution <= kLdpMaxResolution && cert.max_divergence <= kLdpTol + cert.resolution;
  return cert;
}

DpLowerTerms dp_lower_terms(const HypothesisInstance& inst, double delta, double epsilon,
                            HellingerPolicy policy, const ToleranceConfig& tol) {
  require_epsilon(epsilon);
  if (!(delta > 0.0 && delta < inst.p)) {
    throw Error(ErrorCode::PreconditionViolated, "delta must lie in (0, p)");
  }
  const FidelityStats st = fidelity_stats(inst, tol);
  DpLowerTerms t;
  double worst_h = 0.0;
  for (const auto& a : inst.d1.states()) {
    for (const auto& b : inst.d2.states()) worst_h = std::max(worst_h, hellinger_half(a, b, tol));
  }
  if (worst_h > 1.0 + kHellingerSlack) {
    if (policy == HellingerPolicy::Refuse) {
      throw Error(ErrorCode::HellingerConstraintViolated,
                  "cross pair has H_1/2 = " + std::to_string(worst_h) + " > 1");
    }
    t.hellinger_constraint_holds = false;
  }
  if (st.e1_inf <= kZeroDivergence || st.h_half_inf <= kZeroDivergence) {
    throw Error(ErrorCode::TrivialInstance, "some cross pair is indistinguishable");
  }

  const double inf = std::numeric_limits<double>::infinity();
  if (epsilon == 0.0) {
    t.trace_term = inf;
    if (t.hellinger_constraint_holds) t.hellinger_term = inf;
    return t;
  }
  // e^{-eps} (e^eps - 1)^2 = 4 sinh^2(eps / 2); (e^eps + 1) / (e^eps - 1) = coth(eps / 2).
  const double sh = std::sinh(0.5 * epsilon);
  const double gap = 1.0 - delta / inst.p;
  t.trace_term = gap * gap / (4.0 * sh * sh * st.e1_inf * st.e1_inf);
  if (t.hellinger_constraint_holds) {
    const double coth = 1.0 / std::tanh(0.5 * epsilon);
    t.hellinger_term = coth * std::log(inst.p * (1.0 - inst.p) / delta) / (2.0 * st.h_half_inf);
  }
  return t;
}

double dp_lower_bound(const HypothesisInstance& inst, double delta, double epsilon,
                      HellingerPolicy policy, const ToleranceConfig& tol) {
  return dp_lower_terms(inst, delta, epsilon, policy, tol).value();
}

double dp_fidelity_floor(const HypothesisInstance& inst, double epsilon,
                         const ToleranceConfig& tol) {
  require_epsilon(epsilon);
  const double e1 = fidelity_stats(inst, tol).e1_inf;
  if (e1 <= kZeroDivergence) throw Error(ErrorCode::TrivialInstance, "inf E_1 is zero");
  const double th = std::tanh(0.5 * epsilon);
  return 0.5 * th * th * e1 * e1;
}

std::int64_t dp_upper_bound(const HypothesisInstance& inst, double delta, double epsilon,
                            const ToleranceConfig& tol) {
  require_epsilon(epsilon);
  if (epsilon == 0.0) throw Error(ErrorCode::EpsilonZero, "private upper bound diverges at eps = 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::PreconditionViolated, "delta must lie in (0, 1)");
  }
  const double e1 = fidelity_stats(inst, tol).e1_inf;
  if (e1 <= kZeroDivergence) throw Error(ErrorCode::TrivialInstance, "inf E_1 is zero");
  const double coth = 1.0 / std::tanh(0.5 * epsilon);
  const double mm = static_cast<double>(inst.d1.size()) * static_cast<double>(inst.d2.size());
  const double lead = std::log(std::sqrt(mm * inst.p * (1.0 - inst.p)) / delta);
  return snapped_ceil_at_least_one(coth * coth * 2.0 * lead / (e1 * e1));
}

double depolarized_log_fidelity_gap(const HypothesisInstance& inst, double q,
                                    const ToleranceConfig& tol) {
  const DpChannelSpec spec = DpChannelSpec::depolarizing_with_q(0.0, q, inst.dim());
  const PrivateInstance priv = privatize(inst, spec);
  const double f = fidelity_stats(priv.privatized, tol).f_max;
  return f > 0.0 ? -std::log(f) : std::numeric_limits<double>::infinity();
}

SampleComplexity dp_exact_upper_witness(const HypothesisInstance& inst, double delta,
                                        double epsilon, const SolverConfig& cfg) {
  const DpChannelSpec spec = DpChannelSpec::depolarizing(epsilon, inst.dim());
  const LdpCertificate cert = verify_ldp(spec, kDefaultLdpTrials, cfg.seed);
  if (!cert.passes) {
    throw Error(ErrorCode::LdpCertificateFailed,
                "max hockey-stick divergence " + std::to_string(cert.max_divergence) +
                    " (resolution " + std::to_string(cert.resolution) + ")");
  }
  const PrivateInstance priv = privatize(inst, spec);
  return sample_complexity(priv.privatized, delta, cfg);
}

}  // namespace cqht
