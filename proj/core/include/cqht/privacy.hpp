#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "cqht/bounds.hpp"
#include "cqht/hypothesis.hpp"

namespace cqht {

enum class ChannelKind { Depolarizing };

std::string_view to_string(ChannelKind kind) noexcept;

/// rho -> (1 - q) rho + q I/d
struct DpChannelSpec {
  ChannelKind kind = ChannelKind::Depolarizing;
  double epsilon = 0.0;
  double q = 1.0;
  std::size_t dim = 2;

  /// Smallest mixing weight whose outputs satisfy E_{e^eps} = 0 on every
  /// input pair: q = d / (e^eps + d - 1), which is 2 / (e^eps + 1) for qubits.
  static DpChannelSpec depolarizing(double epsilon, std::size_t dim);
  static DpChannelSpec depolarizing_with_q(double epsilon, double q, std::size_t dim);

  void validate() const;
};

double minimal_depolarizing_q(double epsilon, std::size_t dim);

DensityMatrix apply_channel(const DpChannelSpec& spec, const DensityMatrix& rho);

struct PrivateInstance {
  HypothesisInstance base;
  DpChannelSpec channel;
  HypothesisInstance privatized;
};

PrivateInstance privatize(const HypothesisInstance& inst, const DpChannelSpec& spec);

struct LdpCertificate {
  double max_divergence = 0.0;
  /// Round-off bound on each divergence, about dim * machine eps * e^eps.
  double resolution = 0.0;
  bool passes = false;
};

inline constexpr double kLdpTol = 1e-9;
/// Above this resolution the sampled check cannot separate e^eps-scaled
/// outputs from round-off, so no certificate is issued.
inline constexpr double kLdpMaxResolution = 1e-6;
inline constexpr int kDefaultLdpTrials = 500;

/// Samples Haar-random pure pairs (both orders) plus the orthogonal basis
/// pair and reports the largest E_{e^eps} between channel outputs.
LdpCertificate verify_ldp(const DpChannelSpec& spec, int trial_pairs, std::uint64_t seed);

struct DpLowerTerms {
  double trace_term = 0.0;
  /// Empty when some cross pair violates H_1/2 <= 1 under TraceTermOnly.
  std::optional<double> hellinger_term;
  bool hellinger_constraint_holds = true;
  double value() const {
    return hellinger_term && *hellinger_term > trace_term ? *hellinger_term : trace_term;
  }
};

/// The Hellinger term needs H_1/2 <= 1 on every cross pair; the trace term
/// does not. Refuse throws on a violation, TraceTermOnly drops the term and
/// says so in the result.
enum class HellingerPolicy { Refuse, TraceTermOnly };

/// Throws HellingerConstraintViolated (Refuse) when some cross pair has
/// H_1/2 > 1, TrivialInstance when inf E_1 = 0. Terms are +inf at eps = 0.
DpLowerTerms dp_lower_terms(const HypothesisInstance& inst, double delta, double epsilon,
                            HellingerPolicy policy = HellingerPolicy::Refuse,
                            const ToleranceConfig& tol = {});
double dp_lower_bound(const HypothesisInstance& inst, double delta, double epsilon,
                      HellingerPolicy policy = HellingerPolicy::Refuse,
                      const ToleranceConfig& tol = {});

/// 1/2 tanh^2(eps/2) inf E_1^2; returns 0 at eps = 0.
double dp_fidelity_floor(const HypothesisInstance& inst, double epsilon,
                         const ToleranceConfig& tol = {});

/// Throws EpsilonZero at eps = 0.
std::int64_t dp_upper_bound(const HypothesisInstance& inst, double delta, double epsilon,
                            const ToleranceConfig& tol = {});

/// -ln F_max of the instance after depolarizing with weight q.
double depolarized_log_fidelity_gap(const HypothesisInstance& inst, double q,
                                    const ToleranceConfig& tol = {});

/// Exact sample complexity after the minimal certified depolarizing channel;
/// an upper witness for the private sample complexity.
SampleComplexity dp_exact_upper_witness(const HypothesisInstance& inst, double delta,
                                        double epsilon, const SolverConfig& cfg = {});

}  // namespace cqht
