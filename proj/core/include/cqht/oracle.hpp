#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cqht/hypothesis.hpp"
#include "cqht/instance_io.hpp"

namespace cqht {

struct CorpusEntry {
  InstanceFile file;
  HypothesisInstance instance;
};

struct Corpus {
  std::vector<CorpusEntry> entries;
  std::uint64_t seed = 42;

  const CorpusEntry& at(std::string_view id) const;
};

/// Loads every *.json in `dir` in filename order. Throws InputParse on
/// duplicate IDs or on an untagged trivial instance.
Corpus load_corpus(const std::filesystem::path& dir, std::uint64_t seed = 42);

struct OracleResult {
  double value = 0.0;
  double grid_step = 0.0;
  std::int64_t evaluations = 0;
  /// L * h for the Lipschitz constant of the error over the product simplex.
  double error_bound = 0.0;
  MixtureWeights argmax;
};

inline constexpr std::int64_t kGridBudget = 10'000'000;
inline constexpr std::size_t kGridMaxVertices = 4;

/// Default resolution by the larger set: 1 -> single point, 2 -> 0.01,
/// 3 -> 0.05, 4 -> 0.1.
double default_grid_step(std::size_t m1, std::size_t m2);

/// Number of points of the step-h grid on the (m-1)-simplex.
std::int64_t simplex_grid_count(std::size_t m, double step);

/// Exhaustive grid over the product of simplices. Eigenvalues come from
/// Eigen's self-adjoint solver, independent of the library's Jacobi.
/// Throws BudgetExceeded.
OracleResult grid_minimax(const HypothesisInstance& inst, int n, double step);

/// grid_minimax followed by one halving of the step in the box of radius h
/// around the grid argmax.
OracleResult grid_minimax_refined(const HypothesisInstance& inst, int n, double step);

/// 1/2 (1 - sqrt(1 - 4 p (1-p) c^n)) for pure states with |<psi|phi>|^2 = c.
double pure_pair_closed_form(double p, double overlap_sq, int n);

/// Dense-grid argmin over s in [0, 1] of p^s (1-p)^(1-s) tr(psi^{(x)n} sigma^(1-s)),
/// maximized over the vertices sigma of D2. Requires a singleton pure D1 and
/// p >= 1/2 (PreconditionViolated).
double s_profile_oracle(double p, const HypothesisInstance& inst, int n, int grid_points);

/// Same scan without the p >= 1/2 requirement, for exploration.
double s_profile_argmin_unchecked(double p, const HypothesisInstance& inst, int n,
                                  int grid_points);

// Inequality suites ---------------------------------------------------------

namespace suites {
inline constexpr const char* kPowerExponential = "power-exponential";
inline constexpr const char* kBinomialDecay = "binomial-decay";
inline constexpr const char* kChernoffChain = "chernoff-chain";
inline constexpr const char* kMixtureFidelity = "mixture-fidelity";
inline constexpr const char* kHellingerChain = "hellinger-chain";
}  // namespace suites

std::vector<std::string> all_suite_names();

struct SuiteConfig {
  std::uint64_t seed = 42;
  /// Trials for the scalar suites; the matrix suites use `instance_trials`.
  int trials = 1000;
  int instance_trials = 20;
  /// Every check is lhs <= rhs * (1 + rel_slack) + abs_slack. A negative
  /// value tightens the checks (used to confirm the harness can fail).
  double rel_slack = 1e-9;
  double abs_slack = 1e-7;
  /// Empty: run everything.
  std::vector<std::string> only;

  void validate() const;
};

struct CheckFailure {
  std::string suite;
  std::string check;
  std::uint64_t seed = 0;  // reproduces the trial
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;
};

struct SuiteOutcome {
  std::string name;
  std::int64_t checks = 0;
  std::vector<CheckFailure> failures;
  std::vector<std::string> notes;
  double seconds = 0.0;
};

struct SuiteReport {
  std::vector<SuiteOutcome> suites;
  bool passed() const;
  std::int64_t total_checks() const;
  std::int64_t total_failures() const;
};

/// Throws PreconditionViolated for unknown suite names.
SuiteReport inequality_suite(const SuiteConfig& cfg);

/// x^k <= (k / (a e))^k e^(a x), compared in log space.
bool power_exponential_holds(double x, double a, double k, double rel_slack);

/// Random finite qubit sets with sizes and n in [1, max_m] x [1, max_n].
struct RandomSetsInstance {
  HypothesisInstance instance;
  int n;
};
RandomSetsInstance random_qubit_sets(std::uint64_t seed, int max_m, int max_n);

/// sup of F(sigma1(w), sigma2(v)) over `draws` Dirichlet(1) weight pairs
/// plus the product grid of the given step (0 disables the grid).
double sampled_mixture_fidelity_sup(const HypothesisInstance& inst, int n, int draws,
                                    double grid_step, std::uint64_t seed);

}  // namespace cqht
