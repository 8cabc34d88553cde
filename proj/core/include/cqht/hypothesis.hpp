#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cqht/state.hpp"

namespace cqht {

/// Finite, ordered set of states sharing one dimension.
class UncertaintySet {
 public:
  /// Throws EmptySet, DimensionMismatch, or DuplicateState (entrywise 1e-9).
  explicit UncertaintySet(std::vector<DensityMatrix> states);

  /// Channel images of distinct states may coincide (a fully depolarizing
  /// channel maps everything to I/d); such sets keep their cardinality.
  static UncertaintySet allowing_duplicates(std::vector<DensityMatrix> states);

  const std::vector<DensityMatrix>& states() const noexcept { return states_; }
  const DensityMatrix& operator[](std::size_t i) const { return states_[i]; }
  std::size_t size() const noexcept { return states_.size(); }
  std::size_t dim() const noexcept { return states_.front().dim(); }

 private:
  struct NoDedupe {};
  UncertaintySet(std::vector<DensityMatrix> states, NoDedupe);

  std::vector<DensityMatrix> states_;
};

inline constexpr double kDuplicateTol = 1e-9;

struct HypothesisInstance {
  /// Throws PriorOutOfRange unless 0 < p < 1, DimensionMismatch on set dims.
  HypothesisInstance(double prior, UncertaintySet first, UncertaintySet second);

  double p;
  UncertaintySet d1;
  UncertaintySet d2;

  std::size_t dim() const noexcept { return d1.dim(); }
};

struct MixtureWeights {
  std::vector<double> w;  // over d1
  std::vector<double> v;  // over d2
};

struct HelstromSolution {
  double error = 0.0;
  /// Simple tests: projector onto the positive part of p rho1 - (1-p) rho2.
  /// Composite tests: an effect whose worst vertex error is at most
  /// error + fw_gap.
  ComplexMatrix effect;
  std::optional<MixtureWeights> achieving_weights;
  /// Certified bound on (minimax value - error); 0 for simple tests.
  double fw_gap = 0.0;
  int iterations = 0;
};

struct SolverConfig {
  int fw_max_iters = 2000;
  double fw_gap_tol = 1e-7;
  int n_max = 12;
  int restarts = 5;
  std::uint64_t seed = 42;
  ToleranceConfig tol;

  void validate() const;
};

/// Eigenvalues of the Helstrom operator with |lambda| at or below this get
/// supergradient sign 0.
inline constexpr double kSignCutoff = 1e-10;

HelstromSolution helstrom_error(double p, const DensityMatrix& rho1, const DensityMatrix& rho2,
                                const ToleranceConfig& tol = {});

/// Error of the optimal measurement, evaluated for a fixed effect Pi:
/// p tr((I - Pi) rho1) + (1 - p) tr(Pi rho2).
double error_for_effect(double p, const DensityMatrix& rho1, const DensityMatrix& rho2,
                        const ComplexMatrix& effect);

double simple_error_n(double p, const DensityMatrix& rho1, const DensityMatrix& rho2, int n,
                      const ToleranceConfig& tol = {});

/// Same value for qubits without forming 2^n x 2^n matrices: n-fold tensor
/// powers split into blocks det^r Sym^(n-2r) of size n - 2r + 1, repeated
/// C(n, r) - C(n, r - 1) times.
double qubit_simple_error_n(double p, const DensityMatrix& rho1, const DensityMatrix& rho2, int n,
                            const ToleranceConfig& tol = {});

/// Symmetric power Sym^k(m) of a 2 x 2 matrix in the orthonormal Dicke basis.
ComplexMatrix symmetric_power(const ComplexMatrix& m, int k);

/// Worst-case (minimax) error over the convex hulls of the n-copy sets,
/// maximized with pairwise Frank-Wolfe over the product of simplices.
/// Throws DimensionOverflow or NoConvergence.
HelstromSolution composite_error_n(const HypothesisInstance& inst, int n,
                                   const SolverConfig& cfg = {});

/// 1/2 - 1/2 || p sigma1(w) - (1-p) sigma2(v) ||_1 for explicit mixtures of
/// n-copy states. Shared by the grid oracle and diagnostics.
double mixture_error(const HypothesisInstance& inst, int n, const MixtureWeights& weights,
                     const ToleranceConfig& tol = {});

enum class TrivialKind {
  OrthogonalSets,
  DeltaAboveHalf,
  DeltaAbovePrior,
  Overlapping,
  NonTrivial,
};

std::string_view to_string(TrivialKind kind) noexcept;

inline constexpr double kOrthogonalityTol = 1e-12;

bool sets_orthogonal(const HypothesisInstance& inst);
bool sets_overlap(const HypothesisInstance& inst);

/// Checked in the order of the enum; the first matching case wins.
TrivialKind classify_trivial(const HypothesisInstance& inst, double delta);

struct SampleComplexity {
  enum class Kind { Finite, Infinite, CapExceeded };
  Kind kind = Kind::Finite;
  /// Finite: n*. CapExceeded: largest n evaluated.
  int n = 0;
  /// Error at n (Finite / CapExceeded).
  double best_error = 0.0;
  TrivialKind classification = TrivialKind::NonTrivial;
  /// Errors for n = 1, 2, ... as evaluated by the scan.
  std::vector<double> errors;

  static SampleComplexity finite(int n, double err) {
    SampleComplexity s;
    s.kind = Kind::Finite;
    s.n = n;
    s.best_error = err;
    return s;
  }
};

std::string_view to_string(SampleComplexity::Kind kind) noexcept;

/// Linear scan n = 1..n_max, also bounded by max_dim() unless both sets are
/// single qubit states.
SampleComplexity sample_complexity(const HypothesisInstance& inst, double delta,
                                   const SolverConfig& cfg = {});

}  // namespace cqht
