#include "cqht/hypothesis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "cqht/error.hpp"
#include "cqht/rng.hpp"

namespace cqht {

UncertaintySet::UncertaintySet(std::vector<DensityMatrix> states)
    : UncertaintySet(std::move(states), NoDedupe{}) {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    for (std::size_t j = i + 1; j < states_.size(); ++j) {
      if (max_entry_distance(states_[i].mat(), states_[j].mat()) <= kDuplicateTol) {
        throw Error(ErrorCode::DuplicateState,
                    "states " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
}

UncertaintySet::UncertaintySet(std::vector<DensityMatrix> states, NoDedupe)
    : states_(std::move(states)) {
  if (states_.empty()) throw Error(ErrorCode::EmptySet, "uncertainty set has no states");
  for (const auto& s : states_) {
    if (s.dim() != states_.front().dim()) {
      throw Error(ErrorCode::DimensionMismatch, "states in a set must share one dimension");
    }
  }
}

UncertaintySet UncertaintySet::allowing_duplicates(std::vector<DensityMatrix> states) {
  return UncertaintySet(std::move(states), NoDedupe{});
}

HypothesisInstance::HypothesisInstance(double prior, UncertaintySet first, UncertaintySet second)
    : p(prior), d1(std::move(first)), d2(std::move(second)) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::PriorOutOfRange, "prior must lie in (0, 1), got " + std::to_string(p));
  }
  if (d1.dim() != d2.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "the two sets act on different dimensions");
  }
}

void SolverConfig::validate() const {
  if (fw_max_iters <= 0 || !(fw_gap_tol > 0.0) || n_max <= 0 || restarts <= 0) {
    throw Error(ErrorCode::PreconditionViolated, "solver settings must be positive");
  }
  tol.validate();
}

namespace {

void require_prior(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::PriorOutOfRange, "prior must lie in (0, 1), got " + std::to_string(p));
  }
}

double error_from_spectrum(const RealVector& ev) {
  return std::clamp(0.5 * (1.0 - ev.cwiseAbs().sum()), 0.0, 0.5);
}

ComplexMatrix positive_projector(const EigenDecomposition& eig) {
  return apply_spectral(eig, [](double x) { return x > kSignCutoff ? 1.0 : 0.0; });
}

constexpr double kClusterTol = 1e-12;
constexpr double kLpFeasTol = 1e-12;
constexpr std::size_t kMaxFree = 6;
constexpr std::size_t kMaxLpBases = 200000;

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Smoothed sign H (H^2 + mu^2)^(-1/2); mu = 0 gives the plain sign with
// eigenvalues inside the cutoff mapped to 0.
ComplexMatrix sign_operator(const EigenDecomposition& eig, double mu) {
  if (mu > 0.0) {
    return apply_spectral(eig, [mu](double x) { return x / std::hypot(x, mu); });
  }
  return apply_spectral(eig, [](double x) {
    if (x > kSignCutoff) return 1.0;
    if (x < -kSignCutoff) return -1.0;
    return 0.0;
  });
}

// Concave objective g(w, v) = 1/2 - 1/2 || H(w, v) ||_1 with
// H = p sum_j w_j A_j - (1 - p) sum_k v_k B_k over n-copy vertices A, B.
// The solver ascends the smoothed g_mu = 1/2 - 1/2 tr sqrt(H^2 + mu^2) and
// certifies with the effect Pi = (I + S_mu) / 2: every effect gives the
// upper bound max_jk of its error against the vertices.
class MinimaxProblem {
 public:
  MinimaxProblem(const HypothesisInstance& inst, int n, const ToleranceConfig& tol)
      : p_(inst.p), tol_(tol) {
    checked_power_dim(inst.dim(), n);
    for (const auto& s : inst.d1.states()) a_.push_back(tensor_power(s, n).mat());
    for (const auto& s : inst.d2.states()) b_.push_back(tensor_power(s, n).mat());
  }

  std::size_t m1() const { return a_.size(); }
  std::size_t m2() const { return b_.size(); }

  ComplexMatrix helstrom_operator(const MixtureWeights& x) const {
    ComplexMatrix h = ComplexMatrix::Zero(a_.front().rows(), a_.front().cols());
    for (std::size_t j = 0; j < a_.size(); ++j) {
      if (x.w[j] != 0.0) h += (p_ * x.w[j]) * a_[j];
    }
    for (std::size_t k = 0; k < b_.size(); ++k) {
      if (x.v[k] != 0.0) h -= ((1.0 - p_) * x.v[k]) * b_[k];
    }
    return h;
  }

  double value_of(const ComplexMatrix& h) const { return error_from_spectrum(eigvalsh(h, tol_)); }

  static double smoothed_from_spectrum(const RealVector& ev, double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) s += std::hypot(ev(i), mu);
    return 0.5 - 0.5 * s;
  }

  double smoothed_value_of(const ComplexMatrix& h, double mu) const {
    return smoothed_from_spectrum(eigvalsh(h, tol_), mu);
  }

  // Partial derivatives of the smoothed objective for S = S_mu.
  struct Gradient {
    std::vector<double> w;
    std::vector<double> v;
  };

  Gradient gradient(const ComplexMatrix& s) const {
    Gradient g;
    g.w.resize(a_.size());
    g.v.resize(b_.size());
    for (std::size_t j = 0; j < a_.size(); ++j) {
      g.w[j] = -0.5 * p_ * trace_of_product(s, a_[j]).real();
    }
    for (std::size_t k = 0; k < b_.size(); ++k) {
      g.v[k] = 0.5 * (1.0 - p_) * trace_of_product(s, b_[k]).real();
    }
    return g;
  }

  // Hessian of the smoothed objective in (w, v) coordinates, via divided
  // differences of g'(x) = x / sqrt(x^2 + mu^2) in the eigenbasis of H.
  Eigen::MatrixXd smoothed_hessian(const EigenDecomposition& eig, double mu) const {
    const auto d = eig.values.size();
    const std::size_t m = a_.size() + b_.size();
    Eigen::MatrixXd gamma(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index l = 0; l < d; ++l) {
        const double x = eig.values(i);
        const double y = eig.values(l);
        if (std::abs(x - y) <= 1e-9 * mu) {
          gamma(i, l) = mu * mu / std::pow(x * x + mu * mu, 1.5);
        } else {
          gamma(i, l) = (x / std::hypot(x, mu) - y / std::hypot(y, mu)) / (x - y);
        }
      }
    }
    std::vector<ComplexMatrix> rotated;
    rotated.reserve(m);
    for (const auto& a : a_) rotated.push_back(eig.vectors.adjoint() * (p_ * a) * eig.vectors);
    for (const auto& b : b_) {
      rotated.push_back(eig.vectors.adjoint() * (-(1.0 - p_) * b) * eig.vectors);
    }
    Eigen::MatrixXd hess(m, m);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a; b < m; ++b) {
        const double v =
            -0.5 * (gamma.array() * (rotated[a].array() * rotated[b].array().conjugate()).real())
                       .sum();
        hess(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
        hess(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
      }
    }
    return hess;
  }

  struct Certificate {
    double bound = std::numeric_limits<double>::infinity();
    ComplexMatrix effect;
  };

  // Best effect of the form P + sum_c t_c P_c: P projects onto the positive
  // eigenvalues outside the free clusters, P_c onto the up to kMaxFree
  // eigenvalue clusters nearest 0, and t in [0,1]^K solves the small LP
  // min_t p max_j (1 - tr Pi A_j) + (1-p) max_k tr Pi B_k by vertex
  // enumeration.
  Certificate certify(const EigenDecomposition& eig) const {
    const auto d = eig.values.size();
    std::vector<std::vector<Eigen::Index>> clusters;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!clusters.empty() &&
          eig.values(i) - eig.values(clusters.back().back()) <= kClusterTol) {
        clusters.back().push_back(i);
      } else {
        clusters.push_back({i});
      }
    }
    auto distance = [&](const std::vector<Eigen::Index>& c) {
      double m = std::numeric_limits<double>::infinity();
      for (auto i : c) m = std::min(m, std::abs(eig.values(i)));
      return m;
    };
    std::vector<std::size_t> order(clusters.size());
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return distance(clusters[x]) < distance(clusters[y]);
    });

    const std::size_t m = a_.size() + b_.size();
    std::size_t free = std::min<std::size_t>(kMaxFree, clusters.size());
    while (free > 0 && binomial(m + 2 * free, free + 2) > kMaxLpBases) --free;
    std::vector<bool> is_free(clusters.size(), false);
    for (std::size_t c = 0; c < free; ++c) is_free[order[c]] = true;

    ComplexMatrix fixed = ComplexMatrix::Zero(d, d);
    std::vector<ComplexMatrix> parts;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      ComplexMatrix proj = ComplexMatrix::Zero(d, d);
      for (auto i : clusters[c]) proj += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
      if (is_free[c]) {
        parts.push_back(std::move(proj));
      } else if (eig.values(clusters[c].front()) > 0.0) {
        fixed += proj;
      }
    }

    // y = (t_1..t_K, s, r); minimise p s + (1-p) r subject to G y <= h.
    const auto k = static_cast<Eigen::Index>(free);
    const Eigen::Index dim_y = k + 2;
    const auto rows = static_cast<Eigen::Index>(m) + 2 * k;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(rows, dim_y);
    Eigen::VectorXd rhs(rows);
    Eigen::Index r = 0;
    for (const auto& a : a_) {
      for (Eigen::Index c = 0; c < k; ++c) g(r, c) = -trace_of_product(parts[c], a).real();
      g(r, k) = -1.0;
      rhs(r++) = -(1.0 - trace_of_product(fixed, a).real());
    }
    for (const auto& b : b_) {
      for (Eigen::Index c = 0; c < k; ++c) g(r, c) = trace_of_product(parts[c], b).real();
      g(r, k + 1) = -1.0;
      rhs(r++) = -trace_of_product(fixed, b).real();
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      g(r, c) = 1.0;
      rhs(r++) = 1.0;
      g(r, c) = -1.0;
      rhs(r++) = 0.0;
    }
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(dim_y);
    cost(k) = p_;
    cost(k + 1) = 1.0 - p_;

    Certificate best;
    Eigen::VectorXd best_y;
    std::vector<Eigen::Index> pick(static_cast<std::size_t>(dim_y));
    for (Eigen::Index i = 0; i < dim_y; ++i) pick[static_cast<std::size_t>(i)] = i;
    Eigen::MatrixXd sub(dim_y, dim_y);
    Eigen::VectorXd sub_rhs(dim_y);
    while (true) {
      for (Eigen::Index i = 0; i < dim_y; ++i) {
        sub.row(i) = g.row(pick[static_cast<std::size_t>(i)]);
        sub_rhs(i) = rhs(pick[static_cast<std::size_t>(i)]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      if (lu.isInvertible()) {
        const Eigen::VectorXd y = lu.solve(sub_rhs);
        if (((g * y - rhs).array() <= kLpFeasTol).all()) {
          const double value = cost.dot(y);
          if (value < best.bound) {
            best.bound = value;
            best_y = y;
          }
        }
      }
      // next combination of dim_y rows out of `rows`
      Eigen::Index i = dim_y - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == rows - dim_y + i) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (Eigen::Index j = i + 1; j < dim_y; ++j) {
        pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    best.effect = fixed;
    for (Eigen::Index c = 0; c < k; ++c) {
      best.effect += std::clamp(best_y(c), 0.0, 1.0) * parts[static_cast<std::size_t>(c)];
    }
    // Re-evaluate with the clamped effect so the bound is exactly attained.
    best.bound = worst_vertex_error(best.effect);
    return best;
  }

  double worst_vertex_error(const ComplexMatrix& effect) const {
    double miss = 0.0;
    double false_alarm = 0.0;
    for (const auto& a : a_) miss = std::max(miss, 1.0 - trace_of_product(effect, a).real());
    for (const auto& b : b_) false_alarm = std::max(false_alarm, trace_of_product(effect, b).real());
    return p_ * miss + (1.0 - p_) * false_alarm;
  }

  // dH / dw_j (first block) or dH / dv_k.
  ComplexMatrix vertex_direction(bool first_block, std::size_t i) const {
    if (first_block) return p_ * a_[i];
    return -(1.0 - p_) * b_[i];
  }

  // Change of H when unit weight moves from vertex `away` to `toward`.
  ComplexMatrix pair_direction(bool first_block, std::size_t toward, std::size_t away) const {
    if (first_block) return p_ * (a_[toward] - a_[away]);
    return -(1.0 - p_) * (b_[toward] - b_[away]);
  }

  const ToleranceConfig& tol() const { return tol_; }

 private:
  double p_;
  ToleranceConfig tol_;
  std::vector<ComplexMatrix> a_;
  std::vector<ComplexMatrix> b_;
};

double block_gap(const std::vector<double>& grad, const std::vector<double>& x) {
  double best = -std::numeric_limits<double>::infinity();
  double dot = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    best = std::max(best, grad[i]);
    dot += grad[i] * x[i];
  }
  return best - dot;
}

struct PairChoice {
  std::size_t toward = 0;
  std::size_t away = 0;
  double gain = 0.0;  // grad[toward] - grad[away]
};

PairChoice choose_pair(const std::vector<double>& grad, const std::vector<double>& x) {
  PairChoice c;
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (grad[i] > hi) {
      hi = grad[i];
      c.toward = i;
    }
    if (x[i] > 0.0 && grad[i] < lo) {
      lo = grad[i];
      c.away = i;
    }
  }
  c.gain = hi - lo;
  return c;
}

constexpr std::array<double, 7> kSmoothing = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};

struct NewtonDirection {
  std::vector<double> w;
  std::vector<double> v;
  double step_max = 0.0;
};

// Maximiser of the local quadratic model g.d + d'Hd/2 over directions that
// keep both blocks on their simplices and off-support weights at 0.
std::optional<NewtonDirection> newton_direction(const Eigen::MatrixXd& hess,
                                                const MinimaxProblem::Gradient& g,
                                                const MixtureWeights& x) {
  std::vector<Eigen::Index> support;
  const auto m1 = static_cast<Eigen::Index>(x.w.size());
  for (Eigen::Index i = 0; i < m1; ++i) {
    if (x.w[static_cast<std::size_t>(i)] > 0.0) support.push_back(i);
  }
  const auto first_count = static_cast<Eigen::Index>(support.size());
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(x.v.size()); ++i) {
    if (x.v[static_cast<std::size_t>(i)] > 0.0) support.push_back(m1 + i);
  }
  const auto f = static_cast<Eigen::Index>(support.size());
  if (f <= 2) return std::nullopt;  // single vertex in each block: nothing to move

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(f + 2, f + 2);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(f + 2);
  double scale = 0.0;
  for (Eigen::Index a = 0; a < f; ++a) scale = std::max(scale, -hess(support[a], support[a]));
  for (Eigen::Index a = 0; a < f; ++a) {
    for (Eigen::Index b = 0; b < f; ++b) kkt(a, b) = -hess(support[a], support[b]);
    kkt(a, a) += 1e-12 * scale + 1e-300;
    const bool first = a < first_count;
    kkt(a, f + (first ? 0 : 1)) = 1.0;
    kkt(f + (first ? 0 : 1), a) = 1.0;
    const auto idx = static_cast<std::size_t>(support[a]);
    rhs(a) = first ? g.w[idx] : g.v[idx - x.w.size()];
  }
  const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
  if (!sol.allFinite()) return std::nullopt;

  NewtonDirection nd;
  nd.w.assign(x.w.size(), 0.0);
  nd.v.assign(x.v.size(), 0.0);
  double slope = 0.0;
  nd.step_max = 1.0;
  for (Eigen::Index a = 0; a < f; ++a) {
    const auto idx = static_cast<std::size_t>(support[a]);
    const bool first = a < first_count;
    const double xi = first ? x.w[idx] : x.v[idx - x.w.size()];
    (first ? nd.w[idx] : nd.v[idx - x.w.size()]) = sol(a);
    slope += sol(a) * rhs(a);
    if (sol(a) < 0.0) nd.step_max = std::min(nd.step_max, xi / -sol(a));
  }
  if (!(slope > 0.0) || !(nd.step_max > 0.0)) return std::nullopt;
  return nd;
}

struct RestartResult {
  double value = -1.0;
  double gap = std::numeric_limits<double>::infinity();
  int iterations = 0;
  MixtureWeights weights;
  ComplexMatrix effect;
};

RestartResult run_pairwise_frank_wolfe(const MinimaxProblem& prob, MixtureWeights x,
                                       const SolverConfig& cfg) {
  RestartResult out;
  ComplexMatrix h = prob.helstrom_operator(x);

  auto certify = [&](int it) {
    const EigenDecomposition eig = eigh(h, prob.tol());
    const auto cert = prob.certify(eig);
    out.value = error_from_spectrum(eig.values);
    out.gap = std::max(0.0, cert.bound - out.value);
    out.effect = cert.effect;
    out.weights = x;
    out.iterations = it;
    return out.gap <= cfg.fw_gap_tol;
  };

  // Exact line search of the smoothed objective along `dir` in weight space.
  auto line_step = [&](const std::vector<double>& dw, const std::vector<double>& dv,
                       double step_max, double mu, double current) {
    ComplexMatrix dh = ComplexMatrix::Zero(h.rows(), h.cols());
    for (std::size_t j = 0; j < dw.size(); ++j) {
      if (dw[j] != 0.0) dh += prob.vertex_direction(true, j) * dw[j];
    }
    for (std::size_t k = 0; k < dv.size(); ++k) {
      if (dv[k] != 0.0) dh += prob.vertex_direction(false, k) * dv[k];
    }
    auto neg_value = [&](double gamma) { return -prob.smoothed_value_of(h + gamma * dh, mu); };
    const auto [gamma_opt, neg_opt] =
        boost::math::tools::brent_find_minima(neg_value, 0.0, step_max, 40);
    double gamma = gamma_opt;
    double best = -neg_opt;
    const double at_max = -neg_value(step_max);
    if (at_max >= best) {
      gamma = step_max;
      best = at_max;
    }
    if (!(best > current) || gamma <= 0.0) return false;
    auto apply = [&](std::vector<double>& x_block, const std::vector<double>& d_block) {
      for (std::size_t i = 0; i < x_block.size(); ++i) {
        x_block[i] += gamma * d_block[i];
        if (x_block[i] < 1e-15 || (gamma == step_max && d_block[i] < 0.0 &&
                                   x_block[i] <= 1e-12)) {
          x_block[i] = 0.0;
        }
      }
      double total = 0.0;
      for (double xi : x_block) total += xi;
      for (double& xi : x_block) xi /= total;
    };
    apply(x.w, dw);
    apply(x.v, dv);
    h = prob.helstrom_operator(x);
    return true;
  };

  int it = 0;
  if (certify(it)) return out;
  for (std::size_t level = 0; level < kSmoothing.size(); ++level) {
    const double mu = kSmoothing[level];
    const int budget = std::max(
        1, (cfg.fw_max_iters - it) / static_cast<int>(kSmoothing.size() - level));
    for (int local = 0; local < budget && it < cfg.fw_max_iters; ++local, ++it) {
      const EigenDecomposition eig = eigh(h, prob.tol());
      const auto g = prob.gradient(sign_operator(eig, mu));
      const double smooth_gap = block_gap(g.w, x.w) + block_gap(g.v, x.v);
      if (smooth_gap <= 0.01 * std::max(mu, cfg.fw_gap_tol)) break;
      const double current = MinimaxProblem::smoothed_from_spectrum(eig.values, mu);

      // Newton step of the smoothed objective on the face spanned by the
      // current support; a pairwise step brings in new vertices.
      const PairChoice pw = choose_pair(g.w, x.w);
      const PairChoice pv = choose_pair(g.v, x.v);
      bool moved = false;
      const bool enlarges = (x.w[pw.toward] == 0.0 && pw.gain > 0.0) ||
                            (x.v[pv.toward] == 0.0 && pv.gain > 0.0);
      if (!enlarges) {
        const auto nd = newton_direction(prob.smoothed_hessian(eig, mu), g, x);
        if (nd.has_value()) {
          moved = line_step(nd->w, nd->v, nd->step_max, mu, current);
        }
      }
      const bool prefer_first = pw.gain >= pv.gain;
      for (int attempt = 0; attempt < 2 && !moved; ++attempt) {
        const bool first_block = (attempt == 0) == prefer_first;
        const PairChoice& pc = first_block ? pw : pv;
        if (pc.toward == pc.away || pc.gain <= 0.0) continue;
        std::vector<double> dw(x.w.size(), 0.0);
        std::vector<double> dv(x.v.size(), 0.0);
        auto& d = first_block ? dw : dv;
        d[pc.toward] = 1.0;
        d[pc.away] = -1.0;
        moved = line_step(dw, dv, (first_block ? x.w : x.v)[pc.away], mu, current);
      }
      if (!moved) break;
    }
    if (certify(it)) return out;
  }
  return out;
}

std::vector<double> dirichlet_ones(std::size_t m, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> x(m);
  double total = 0.0;
  for (auto& xi : x) {
    xi = expo(rng);
    total += xi;
  }
  for (auto& xi : x) xi /= total;
  return x;
}

}  // namespace

HelstromSolution helstrom_error(double p, const DensityMatrix& rho1, const DensityMatrix& rho2,
                                const ToleranceConfig& tol) {
  require_prior(p);
  if (rho1.dim() != rho2.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "states act on different dimensions");
  }
  const EigenDecomposition eig = eigh(p * rho1.mat() - (1.0 - p) * rho2.mat(), tol);
  HelstromSolution sol;
  sol.error = error_from_spectrum(eig.values);
  sol.effect = positive_projector(eig);
  return sol;
}

double error_for_effect(double p, const DensityMatrix& rho1, const DensityMatrix& rho2,
                        const ComplexMatrix& effect) {
  const double miss = 1.0 - trace_of_product(effect, rho1.mat()).real();
  const double false_alarm = trace_of_product(effect, rho2.mat()).real();
  return p * miss + (1.0 - p) * false_alarm;
}

double simple_error_n(double p, const DensityMatrix& rho1, const DensityMatrix& rho2, int n,
                      const ToleranceConfig& tol) {
  require_prior(p);
  if (rho1.dim() != rho2.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "states act on different dimensions");
  }
  const DensityMatrix a = tensor_power(rho1, n);
  const DensityMatrix b = tensor_power(rho2, n);
  return error_from_spectrum(eigvalsh(p * a.mat() - (1.0 - p) * b.mat(), tol));
}

namespace {

Complex ipow(Complex z, int k) {
  Complex out(1.0, 0.0);
  for (int i = 0; i < k; ++i) out *= z;
  return out;
}

double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

ComplexMatrix symmetric_power(const ComplexMatrix& m, int k) {
  if (m.rows() != 2 || m.cols() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "symmetric_power needs a 2 x 2 matrix");
  }
  if (k < 0) throw Error(ErrorCode::PreconditionViolated, "symmetric power must be >= 0");
  ComplexMatrix out(k + 1, k + 1);
  // <D_i| m^(x)k |D_j>: r of the j ones stay ones, i - r zeros flip to one.
  for (int i = 0; i <= k; ++i) {
    for (int j = 0; j <= k; ++j) {
      Complex sum(0.0, 0.0);
      for (int r = std::max(0, i + j - k); r <= std::min(i, j); ++r) {
        const double c = choose(j, r) * choose(k - j, i - r);
        sum += c * ipow(m(1, 1), r) * ipow(m(0, 1), j - r) * ipow(m(1, 0), i - r) *
               ipow(m(0, 0), k - j - i + r);
      }
      out(i, j) = sum * std::sqrt(choose(k, j) / choose(k, i));
    }
  }
  return out;
}

double qubit_simple_error_n(double p, const DensityMatrix& rho1, const DensityMatrix& rho2, int n,
                            const ToleranceConfig& tol) {
  require_prior(p);
  if (rho1.dim() != 2 || rho2.dim() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "qubit_simple_error_n needs qubit states");
  }
  if (n < 1) throw Error(ErrorCode::PreconditionViolated, "n must be >= 1");
  const double det1 = std::max(0.0, rho1.mat().determinant().real());
  const double det2 = std::max(0.0, rho2.mat().determinant().real());
  double norm = 0.0;
  for (int r = 0; 2 * r <= n; ++r) {
    const double mult = choose(n, r) - choose(n, r - 1);
    const ComplexMatrix block = p * std::pow(det1, r) * symmetric_power(rho1.mat(), n - 2 * r) -
                                (1.0 - p) * std::pow(det2, r) * symmetric_power(rho2.mat(), n - 2 * r);
    norm += mult * eigvalsh(block, tol).cwiseAbs().sum();
  }
  return std::clamp(0.5 * (1.0 - norm), 0.0, 0.5);
}

double mixture_error(const HypothesisInstance& inst, int n, const MixtureWeights& weights,
                     const ToleranceConfig& tol) {
  if (weights.w.size() != inst.d1.size() || weights.v.size() != inst.d2.size()) {
    throw Error(ErrorCode::DimensionMismatch, "weight vector sizes do not match the sets");
  }
  const MinimaxProblem prob(inst, n, tol);
  return prob.value_of(prob.helstrom_operator(weights));
}

HelstromSolution composite_error_n(const HypothesisInstance& inst, int n,
                                   const SolverConfig& cfg) {
  cfg.validate();
  const MinimaxProblem prob(inst, n, cfg.tol);
  const std::size_t m1 = prob.m1();
  const std::size_t m2 = prob.m2();

  auto finish = [](const RestartResult& r) {
    HelstromSolution sol;
    sol.error = r.value;
    sol.effect = r.effect;
    sol.achieving_weights = r.weights;
    sol.fw_gap = r.gap;
    sol.iterations = r.iterations;
    return sol;
  };

  MixtureWeights uniform{std::vector<double>(m1, 1.0 / static_cast<double>(m1)),
                         std::vector<double>(m2, 1.0 / static_cast<double>(m2))};
  if (m1 == 1 && m2 == 1) {
    return finish(run_pairwise_frank_wolfe(prob, uniform, cfg));
  }

  RestartResult best;
  bool any_converged = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    MixtureWeights start = uniform;
    if (r > 0) {
      std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
      start.w = dirichlet_ones(m1, rng);
      start.v = dirichlet_ones(m2, rng);
    }
    RestartResult res = run_pairwise_frank_wolfe(prob, std::move(start), cfg);
    const bool converged = res.gap <= cfg.fw_gap_tol;
    any_converged = any_converged || converged;
    if (res.value > best.value) best = std::move(res);
  }
  if (!any_converged) {
    throw Error(ErrorCode::NoConvergence,
                "Frank-Wolfe gap " + std::to_string(best.gap) + " above tolerance after " +
                    std::to_string(cfg.restarts) + " restarts");
  }
  return finish(best);
}

std::string_view to_string(TrivialKind kind) noexcept {
  switch (kind) {
    case TrivialKind::OrthogonalSets: return "OrthogonalSets";
    case TrivialKind::DeltaAboveHalf: return "DeltaAboveHalf";
    case TrivialKind::DeltaAbovePrior: return "DeltaAbovePrior";
    case TrivialKind::Overlapping: return "Overlapping";
    case TrivialKind::NonTrivial: return "NonTrivial";
  }
  return "Unknown";
}

std::string_view to_string(SampleComplexity::Kind kind) noexcept {
  switch (kind) {
    case SampleComplexity::Kind::Finite: return "finite";
    case SampleComplexity::Kind::Infinite: return "infinite";
    case SampleComplexity::Kind::CapExceeded: return "cap_exceeded";
  }
  return "unknown";
}

bool sets_orthogonal(const HypothesisInstance& inst) {
  for (const auto& a : inst.d1.states()) {
    for (const auto& b : inst.d2.states()) {
      if (trace_of_product(a.mat(), b.mat()).real() > kOrthogonalityTol) return false;
    }
  }
  return true;
}

bool sets_overlap(const HypothesisInstance& inst) {
  for (const auto& a : inst.d1.states()) {
    for (const auto& b : inst.d2.states()) {
      if (max_entry_distance(a.mat(), b.mat()) <= kDuplicateTol) return true;
    }
  }
  return false;
}

TrivialKind classify_trivial(const HypothesisInstance& inst, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw Error(ErrorCode::PreconditionViolated, "delta must lie in (0, 1]");
  }
  if (sets_orthogonal(inst)) return TrivialKind::OrthogonalSets;
  if (delta >= 0.5) return TrivialKind::DeltaAboveHalf;
  // p^s (1-p)^(1-s) is log-linear in s, so its minimum over [0, 1] is
  // min(p, 1 - p) at an endpoint.
  const double floor = std::min(inst.p, 1.0 - inst.p);
  if (delta >= floor) return TrivialKind::DeltaAbovePrior;
  if (sets_overlap(inst)) return TrivialKind::Overlapping;
  return TrivialKind::NonTrivial;
}

SampleComplexity sample_complexity(const HypothesisInstance& inst, double delta,
                                   const SolverConfig& cfg) {
  cfg.validate();
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::PreconditionViolated, "delta must lie in (0, 1)");
  }
  const TrivialKind kind = classify_trivial(inst, delta);
  SampleComplexity out;
  out.classification = kind;
  switch (kind) {
    case TrivialKind::OrthogonalSets:
    case TrivialKind::DeltaAboveHalf:
    case TrivialKind::DeltaAbovePrior:
      out.kind = SampleComplexity::Kind::Finite;
      out.n = 1;
      out.best_error = composite_error_n(inst, 1, cfg).error;
      out.errors.push_back(out.best_error);
      return out;
    case TrivialKind::Overlapping:
      out.kind = SampleComplexity::Kind::Infinite;
      out.n = 0;
      out.best_error = std::min(inst.p, 1.0 - inst.p);
      return out;
    case TrivialKind::NonTrivial:
      break;
  }

  const bool qubit_pair = inst.dim() == 2 && inst.d1.size() == 1 && inst.d2.size() == 1;
  for (int n = 1; n <= cfg.n_max; ++n) {
    double err = 0.0;
    if (qubit_pair) {
      err = qubit_simple_error_n(inst.p, inst.d1[0], inst.d2[0], n, cfg.tol);
    } else {
      try {
        checked_power_dim(inst.dim(), n);
      } catch (const Error&) {
        break;
      }
      err = composite_error_n(inst, n, cfg).error;
    }
    out.errors.push_back(err);
    out.n = n;
    out.best_error = err;
    if (err <= delta) {
      out.kind = SampleComplexity::Kind::Finite;
      return out;
    }
  }
  out.kind = SampleComplexity::Kind::CapExceeded;
  return out;
}

}  // namespace cqht
