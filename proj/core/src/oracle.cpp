#include "cqht/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cqht/bounds.hpp"
#include "cqht/error.hpp"
#include "cqht/rng.hpp"

namespace cqht {

namespace {

using SolverValues = Eigen::SelfAdjointEigenSolver<ComplexMatrix>;

double oracle_trace_norm(const ComplexMatrix& h) {
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  return SolverValues(sym, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().sum();
}

ComplexMatrix oracle_sqrt(const ComplexMatrix& a) {
  const SolverValues es(0.5 * (a + a.adjoint()));
  RealVector r = es.eigenvalues();
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = r(i) > kSupportCutoff ? std::sqrt(r(i)) : 0.0;
  return es.eigenvectors() * r.asDiagonal() * es.eigenvectors().adjoint();
}

double oracle_fidelity_from_roots(const ComplexMatrix& sa, const ComplexMatrix& sb) {
  const ComplexMatrix prod = sa * sb;
  return Eigen::JacobiSVD<ComplexMatrix>(prod).singularValues().sum();
}

std::vector<ComplexMatrix> powers(const UncertaintySet& set, int n) {
  std::vector<ComplexMatrix> out;
  out.reserve(set.size());
  for (const auto& s : set.states()) out.push_back(tensor_power(s, n).mat());
  return out;
}

ComplexMatrix combine(const std::vector<ComplexMatrix>& mats, const std::vector<double>& w) {
  ComplexMatrix out = ComplexMatrix::Zero(mats.front().rows(), mats.front().cols());
  for (std::size_t j = 0; j < mats.size(); ++j) {
    if (w[j] != 0.0) out += w[j] * mats[j];
  }
  return out;
}

int grid_divisions(double step) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw Error(ErrorCode::PreconditionViolated, "grid step must lie in (0, 1]");
  }
  const double k = std::round(1.0 / step);
  if (std::abs(k * step - 1.0) > 1e-9) {
    throw Error(ErrorCode::PreconditionViolated, "grid step must divide 1");
  }
  return static_cast<int>(k);
}

std::int64_t binomial_or_cap(std::int64_t top, std::int64_t k) {
  // C(top, k), saturating just above the grid budget.
  double acc = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<double>(top - k + i) / static_cast<double>(i);
    if (acc > 4.0 * static_cast<double>(kGridBudget)) return kGridBudget * 4;
  }
  return static_cast<std::int64_t>(std::llround(acc));
}

void compositions(int total, std::size_t parts, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int i = 0; i <= total; ++i) {
    cur.push_back(i);
    compositions(total - i, parts, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<double>> simplex_grid(std::size_t m, int divisions) {
  std::vector<std::vector<int>> raw;
  std::vector<int> cur;
  compositions(divisions, m, cur, raw);
  std::vector<std::vector<double>> out;
  out.reserve(raw.size());
  for (const auto& c : raw) {
    std::vector<double> w(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) w[j] = static_cast<double>(c[j]) / divisions;
    out.push_back(std::move(w));
  }
  return out;
}

double max_pairwise_trace_norm(const std::vector<ComplexMatrix>& mats) {
  double best = 0.0;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    for (std::size_t j = i + 1; j < mats.size(); ++j) {
      best = std::max(best, oracle_trace_norm(mats[i] - mats[j]));
    }
  }
  return best;
}

struct GridProblem {
  double p;
  std::vector<ComplexMatrix> a;
  std::vector<ComplexMatrix> b;
  double lipschitz = 0.0;

  GridProblem(const HypothesisInstance& inst, int n)
      : p(inst.p), a(powers(inst.d1, n)), b(powers(inst.d2, n)) {
    lipschitz = 0.5 * (p * static_cast<double>(a.size()) * max_pairwise_trace_norm(a) +
                       (1.0 - p) * static_cast<double>(b.size()) * max_pairwise_trace_norm(b));
  }

  // Scans the product of two explicit weight lists.
  void scan(const std::vector<std::vector<double>>& ws, const std::vector<std::vector<double>>& vs,
            OracleResult& res) const {
    std::vector<ComplexMatrix> left;
    left.reserve(ws.size());
    for (const auto& w : ws) left.push_back(p * combine(a, w));
    std::vector<ComplexMatrix> right;
    right.reserve(vs.size());
    for (const auto& v : vs) right.push_back((1.0 - p) * combine(b, v));
    for (std::size_t i = 0; i < ws.size(); ++i) {
      for (std::size_t k = 0; k < vs.size(); ++k) {
        const double val = 0.5 - 0.5 * oracle_trace_norm(left[i] - right[k]);
        ++res.evaluations;
        if (res.evaluations == 1 || val > res.value) {
          res.value = val;
          res.argmax = MixtureWeights{ws[i], vs[k]};
        }
      }
    }
  }
};

void check_grid_budget(const HypothesisInstance& inst, double step) {
  if (inst.d1.size() > kGridMaxVertices || inst.d2.size() > kGridMaxVertices) {
    throw Error(ErrorCode::BudgetExceeded, "grid oracle supports at most 4 states per set");
  }
  const std::int64_t c1 = simplex_grid_count(inst.d1.size(), step);
  const std::int64_t c2 = simplex_grid_count(inst.d2.size(), step);
  if (c1 > kGridBudget || c2 > kGridBudget || c1 * c2 > kGridBudget) {
    throw Error(ErrorCode::BudgetExceeded, "grid needs more than 1e7 evaluations");
  }
}

std::vector<std::vector<double>> near(const std::vector<std::vector<double>>& grid,
                                      const std::vector<double>& center, double radius) {
  std::vector<std::vector<double>> out;
  for (const auto& w : grid) {
    bool ok = true;
    for (std::size_t j = 0; j < w.size() && ok; ++j) ok = std::abs(w[j] - center[j]) <= radius + 1e-12;
    if (ok) out.push_back(w);
  }
  return out;
}

ComplexVector leading_vector(const DensityMatrix& rho) {
  const SolverValues es(rho.mat());
  return es.eigenvectors().col(es.eigenvalues().size() - 1);
}

double s_argmin_for_vertex(double p, const ComplexVector& psi_n, const DensityMatrix& sigma,
                           int n, int grid_points) {
  const SolverValues es(tensor_power(sigma, n).mat());
  const RealVector mu = es.eigenvalues();
  RealVector c(mu.size());
  for (Eigen::Index j = 0; j < mu.size(); ++j) c(j) = std::norm(es.eigenvectors().col(j).dot(psi_n));

  auto f = [&](double s) {
    double tr = 0.0;
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
      if (mu(j) > kSupportCutoff) tr += std::pow(mu(j), 1.0 - s) * c(j);
    }
    return std::pow(p, s) * std::pow(1.0 - p, 1.0 - s) * tr;
  };
  double best_s = 0.0;
  double best = f(0.0);
  for (int i = 1; i < grid_points; ++i) {
    const double s = static_cast<double>(i) / (grid_points - 1);
    const double v = f(s);
    if (v < best - 1e-15 * std::abs(best)) {
      best = v;
      best_s = s;
    }
  }
  return best_s;
}

std::vector<double> dirichlet(std::size_t m, std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> w(m);
  double total = 0.0;
  for (auto& x : w) {
    x = ex(rng);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

// Suites --------------------------------------------------------------------

struct SuiteRun {
  const SuiteConfig& cfg;
  SuiteOutcome out;

  bool check(const std::string& name, std::uint64_t seed, double lhs, double rhs,
             const std::string& detail = {}) {
    ++out.checks;
    const double limit = rhs * (1.0 + cfg.rel_slack) + cfg.abs_slack;
    if (lhs <= limit) return true;
    out.failures.push_back(CheckFailure{out.name, name, seed, lhs, limit, detail});
    return false;
  }

  void error(const std::string& name, std::uint64_t seed, const std::exception& e) {
    ++out.checks;
    out.failures.push_back(CheckFailure{out.name, name, seed, 0.0, 0.0, e.what()});
  }
};

std::uint64_t suite_stream(const SuiteConfig& cfg, std::uint64_t suite_index, int trial) {
  return derive_seed(derive_seed(cfg.seed, suite_index), static_cast<std::uint64_t>(trial));
}

void run_power_exponential(SuiteRun& run) {
  const SuiteConfig& cfg = run.cfg;
  auto one = [&](double x, double a, double k, std::uint64_t seed) {
    ++run.out.checks;
    if (power_exponential_holds(x, a, k, cfg.rel_slack)) return;
    const double lhs = k * std::log(x);
    const double rhs = k * std::log(k / (a * std::numbers::e)) + a * x;
    run.out.failures.push_back(CheckFailure{run.out.name, "x^k <= (k/(ae))^k e^(ax)", seed, lhs,
                                            rhs, "log scale; x=" + std::to_string(x) +
                                                     " a=" + std::to_string(a) +
                                                     " k=" + std::to_string(k)});
  };
  one(3.0, 0.5, 3.0, cfg.seed);
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = suite_stream(cfg, 0, t);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lx(-5.0, 5.0);
    std::uniform_real_distribution<double> la(-5.0, 3.0);
    std::uniform_real_distribution<double> lk(-3.0, 3.0);
    const double x = std::exp(lx(rng));
    const double a = std::exp(la(rng));
    const double k = std::exp(lk(rng));
    one(x, a, k, seed);
  }
}

void run_binomial_decay(SuiteRun& run) {
  for (std::int64_t d : {2, 3}) {
    const double f = fmax_monotonicity_threshold(d);
    double prev = static_cast<double>(caratheodory_dim(d, 1)) * f;
    for (int n = 2; n <= 50; ++n) {
      const double cur = static_cast<double>(caratheodory_dim(d, n)) * std::pow(f, n);
      ++run.out.checks;
      if (cur > prev * (1.0 + run.cfg.rel_slack)) {
        run.out.failures.push_back(CheckFailure{run.out.name, "C(n+d^2-1,n) f^n non-increasing",
                                                static_cast<std::uint64_t>(d), cur, prev,
                                                "d=" + std::to_string(d) + " n=" + std::to_string(n)});
      }
      prev = cur;
    }
  }
}

double vertex_chernoff_cap(const HypothesisInstance& inst, int n) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 20; ++i) {
    const double s = i / 20.0;
    double sup = 0.0;
    for (const auto& a : inst.d1.states()) {
      for (const auto& b : inst.d2.states()) {
        sup = std::max(sup, std::pow(inst.p, s) * std::pow(1.0 - inst.p, 1.0 - s) *
                                std::pow(holevo_overlap(a, b, s), n));
      }
    }
    best = std::min(best, sup);
  }
  return best;
}

double mixture_chernoff(double p, const DensityMatrix& a, const DensityMatrix& b) {
  const OverlapProfile overlap(a, b);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 20; ++i) {
    const double s = i / 20.0;
    best = std::min(best, std::pow(p, s) * std::pow(1.0 - p, 1.0 - s) * overlap(s));
  }
  return best;
}

void run_chernoff_chain(SuiteRun& run) {
  const SuiteConfig& cfg = run.cfg;
  {
    const DensityMatrix zero = DensityMatrix::basis(2, 0);
    const DensityMatrix plus = bloch_state(1.0, 0.0, 0.0);
    const double exact = simple_error_n(0.5, zero, plus, 2);
    run.check("simple error <= vertex Chernoff cap", cfg.seed, exact,
              vertex_chernoff_cap(HypothesisInstance(0.5, UncertaintySet({zero}), UncertaintySet({plus})), 2),
              "|0>, |+>, n=2");
  }
  SolverConfig solver;
  solver.seed = cfg.seed;
  int composite = 0;
  int vertex_exceeded = 0;
  for (int t = 0; t < cfg.instance_trials; ++t) {
    const std::uint64_t seed = suite_stream(cfg, 2, t);
    try {
      const RandomSetsInstance r = random_qubit_sets(seed, 2, 2);
      const HypothesisInstance& inst = r.instance;
      const auto a = powers(inst.d1, r.n);
      const auto b = powers(inst.d2, r.n);
      const HelstromSolution sol = composite_error_n(inst, r.n, solver);
      const double cap = vertex_chernoff_cap(inst, r.n);
      const bool singleton = inst.d1.size() == 1 && inst.d2.size() == 1;

      // The vertex cap only holds for singletons; on hulls the
      // overlap is jointly concave and interior mixtures can exceed it.
      if (singleton) {
        run.check("minimax error <= vertex Chernoff cap", seed, sol.error, cap);
      } else {
        ++composite;
        if (sol.error > cap + cfg.abs_slack) ++vertex_exceeded;
      }

      const MixtureWeights& opt = *sol.achieving_weights;
      run.check("minimax error <= Chernoff bound of its optimal mixture", seed, sol.error,
                mixture_chernoff(inst.p, DensityMatrix::assume_valid(combine(a, opt.w)),
                                 DensityMatrix::assume_valid(combine(b, opt.v))));
      std::mt19937_64 rng(derive_seed(seed, 1));
      for (int k = 0; k < 50; ++k) {
        MixtureWeights mw{dirichlet(inst.d1.size(), rng), dirichlet(inst.d2.size(), rng)};
        const DensityMatrix s1 = DensityMatrix::assume_valid(combine(a, mw.w));
        const DensityMatrix s2 = DensityMatrix::assume_valid(combine(b, mw.v));
        const double e = 0.5 - 0.5 * oracle_trace_norm(inst.p * s1.mat() - (1.0 - inst.p) * s2.mat());
        run.check("mixture error <= its Chernoff bound", seed, e, mixture_chernoff(inst.p, s1, s2));
        run.check("mixture error <= minimax error", seed, e, sol.error);
      }
    } catch (const std::exception& e) {
      run.error("chernoff chain evaluation", seed, e);
    }
  }
  run.out.notes.push_back("vertex-only Chernoff cap exceeded by the minimax error on " +
                          std::to_string(vertex_exceeded) + " of " + std::to_string(composite) +
                          " composite instances");
}

void run_mixture_fidelity(SuiteRun& run) {
  const SuiteConfig& cfg = run.cfg;
  int cardinality_tighter = 0;
  for (int t = 0; t < cfg.instance_trials; ++t) {
    const std::uint64_t seed = suite_stream(cfg, 3, t);
    try {
      const RandomSetsInstance r = random_qubit_sets(seed, 3, 3);
      const HypothesisInstance& inst = r.instance;
      double fmax = 0.0;
      for (const auto& a : inst.d1.states()) {
        for (const auto& b : inst.d2.states()) {
          fmax = std::max(fmax, oracle_fidelity_from_roots(oracle_sqrt(a.mat()), oracle_sqrt(b.mat())));
        }
      }
      const double fn = std::pow(fmax, r.n);
      const double sup = sampled_mixture_fidelity_sup(inst, r.n, 200, 0.05, derive_seed(seed, 1));
      const double m1m2 = static_cast<double>(inst.d1.size() * inst.d2.size());
      const double cap3 = std::sqrt(m1m2) * fn;
      const double cap4 = static_cast<double>(caratheodory_dim(2, r.n)) * fn;
      run.check("mixture fidelity <= sqrt(m1 m2) F_max^n", seed, sup, cap3);
      run.check("mixture fidelity <= C(n+3,n) F_max^n", seed, sup, cap4);
      if (cap3 < cap4) ++cardinality_tighter;
    } catch (const std::exception& e) {
      run.error("mixture fidelity evaluation", seed, e);
    }
  }
  run.out.notes.push_back("cardinality cap tighter than dimension cap on " +
                          std::to_string(cardinality_tighter) + " of " +
                          std::to_string(cfg.instance_trials) + " instances");
}

void run_hellinger_chain(SuiteRun& run) {
  const SuiteConfig& cfg = run.cfg;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = suite_stream(cfg, 4, t);
    try {
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<int> rank(1, 2);
      const DensityMatrix a = random_density_matrix(2, static_cast<std::size_t>(rank(rng)), rng);
      const DensityMatrix b = random_density_matrix(2, static_cast<std::size_t>(rank(rng)), rng);
      const double f = fidelity(a, b);
      const double h = hellinger_half(a, b);
      run.check("tr(sqrt(rho) sqrt(sigma)) <= F", seed, 1.0 - 0.5 * h, f);
      if (h <= 1.0 && f > 0.0) run.check("-ln F <= H_1/2", seed, -std::log(f), h);
    } catch (const std::exception& e) {
      run.error("hellinger chain evaluation", seed, e);
    }
  }
}

}  // namespace

const CorpusEntry& Corpus::at(std::string_view id) const {
  for (const auto& e : entries) {
    if (e.file.id == id) return e;
  }
  throw Error(ErrorCode::InputParse, "no corpus instance with id " + std::string(id));
}

Corpus load_corpus(const std::filesystem::path& dir, std::uint64_t seed) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::InputParse, dir.string() + ": not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& ent : std::filesystem::directory_iterator(dir)) {
    if (ent.is_regular_file() && ent.path().extension() == ".json") files.push_back(ent.path());
  }
  std::sort(files.begin(), files.end());

  Corpus corpus;
  corpus.seed = seed;
  std::set<std::string> ids;
  for (const auto& path : files) {
    InstanceFile f = load_instance(path);
    if (f.id.empty()) f.id = path.stem().string();
    if (!ids.insert(f.id).second) {
      throw Error(ErrorCode::InputParse, path.filename().string() + ": duplicate id " + f.id);
    }
    HypothesisInstance inst = f.instance();
    if (!f.has_tag("trivial") && classify_trivial(inst, f.delta) != TrivialKind::NonTrivial) {
      throw Error(ErrorCode::InputParse,
                  path.filename().string() + ": trivial instance is not tagged trivial");
    }
    corpus.entries.push_back(CorpusEntry{std::move(f), std::move(inst)});
  }
  return corpus;
}

double default_grid_step(std::size_t m1, std::size_t m2) {
  switch (std::max(m1, m2)) {
    case 1: return 1.0;
    case 2: return 0.01;
    case 3: return 0.05;
    default: return 0.1;
  }
}

std::int64_t simplex_grid_count(std::size_t m, double step) {
  if (m < 1) throw Error(ErrorCode::EmptySet, "simplex needs at least one vertex");
  const int k = grid_divisions(step);
  return binomial_or_cap(k + static_cast<std::int64_t>(m) - 1, static_cast<std::int64_t>(m) - 1);
}

OracleResult grid_minimax(const HypothesisInstance& inst, int n, double step) {
  check_grid_budget(inst, step);
  const int k = grid_divisions(step);
  const GridProblem prob(inst, n);
  OracleResult res;
  res.grid_step = step;
  prob.scan(simplex_grid(inst.d1.size(), k), simplex_grid(inst.d2.size(), k), res);
  res.error_bound = prob.lipschitz * step;
  return res;
}

OracleResult grid_minimax_refined(const HypothesisInstance& inst, int n, double step) {
  check_grid_budget(inst, step);
  const int k = grid_divisions(step);
  const GridProblem prob(inst, n);
  OracleResult res;
  prob.scan(simplex_grid(inst.d1.size(), k), simplex_grid(inst.d2.size(), k), res);

  const MixtureWeights centre = res.argmax;
  const auto fine_w = near(simplex_grid(inst.d1.size(), 2 * k), centre.w, step);
  const auto fine_v = near(simplex_grid(inst.d2.size(), 2 * k), centre.v, step);
  prob.scan(fine_w, fine_v, res);
  res.grid_step = 0.5 * step;
  res.error_bound = prob.lipschitz * step;
  return res;
}

double pure_pair_closed_form(double p, double overlap_sq, int n) {
  if (!(overlap_sq >= 0.0 && overlap_sq <= 1.0)) {
    throw Error(ErrorCode::PreconditionViolated, "overlap must lie in [0, 1]");
  }
  const double inner = 1.0 - 4.0 * p * (1.0 - p) * std::pow(overlap_sq, n);
  return 0.5 * (1.0 - std::sqrt(std::max(0.0, inner)));
}

double s_profile_argmin_unchecked(double p, const HypothesisInstance& inst, int n,
                                  int grid_points) {
  if (inst.d1.size() != 1 || !inst.d1[0].is_pure(kPurityTol)) {
    throw Error(ErrorCode::PreconditionViolated, "first set must be a single pure state");
  }
  if (grid_points < 2) throw Error(ErrorCode::PreconditionViolated, "need at least 2 grid points");
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::PriorOutOfRange, "p must lie in (0, 1)");
  const ComplexVector psi = leading_vector(inst.d1[0]);
  ComplexVector psi_n = psi;
  for (int i = 1; i < n; ++i) {
    ComplexVector next(psi_n.size() * psi.size());
    for (Eigen::Index a = 0; a < psi_n.size(); ++a) {
      next.segment(a * psi.size(), psi.size()) = psi_n(a) * psi;
    }
    psi_n = std::move(next);
  }
  double worst = 0.0;
  for (const auto& sigma : inst.d2.states()) {
    worst = std::max(worst, s_argmin_for_vertex(p, psi_n, sigma, n, grid_points));
  }
  return worst;
}

double s_profile_oracle(double p, const HypothesisInstance& inst, int n, int grid_points) {
  if (p < 0.5) throw Error(ErrorCode::PreconditionViolated, "requires p >= 1/2");
  return s_profile_argmin_unchecked(p, inst, n, grid_points);
}

std::vector<std::string> all_suite_names() {
  return {suites::kPowerExponential, suites::kBinomialDecay, suites::kChernoffChain,
          suites::kMixtureFidelity, suites::kHellingerChain};
}

void SuiteConfig::validate() const {
  if (trials < 1 || instance_trials < 1) {
    throw Error(ErrorCode::PreconditionViolated, "trials must be >= 1");
  }
  if (!(rel_slack > -1.0)) throw Error(ErrorCode::PreconditionViolated, "rel_slack must exceed -1");
  const auto names = all_suite_names();
  for (const auto& s : only) {
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      throw Error(ErrorCode::PreconditionViolated, "unknown suite " + s);
    }
  }
}

bool SuiteReport::passed() const { return total_failures() == 0; }

std::int64_t SuiteReport::total_checks() const {
  std::int64_t n = 0;
  for (const auto& s : suites) n += s.checks;
  return n;
}

std::int64_t SuiteReport::total_failures() const {
  std::int64_t n = 0;
  for (const auto& s : suites) n += static_cast<std::int64_t>(s.failures.size());
  return n;
}

bool power_exponential_holds(double x, double a, double k, double rel_slack) {
  const double lhs = k * std::log(x);
  const double rhs = k * std::log(k / (a * std::numbers::e)) + a * x;
  return lhs <= rhs + std::log1p(rel_slack);
}

RandomSetsInstance random_qubit_sets(std::uint64_t seed, int max_m, int max_n) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> msz(1, max_m);
  std::uniform_int_distribution<int> nsz(1, max_n);
  std::uniform_int_distribution<int> rank(1, 2);
  std::uniform_real_distribution<double> prior(0.2, 0.8);
  const int m1 = msz(rng);
  const int m2 = msz(rng);
  const int n = nsz(rng);
  const double p = prior(rng);
  auto draw = [&](int m) {
    std::vector<DensityMatrix> out;
    for (int i = 0; i < m; ++i) {
      out.push_back(random_density_matrix(2, static_cast<std::size_t>(rank(rng)), rng));
    }
    return UncertaintySet(std::move(out));
  };
  UncertaintySet d1 = draw(m1);
  UncertaintySet d2 = draw(m2);
  return RandomSetsInstance{HypothesisInstance(p, std::move(d1), std::move(d2)), n};
}

double sampled_mixture_fidelity_sup(const HypothesisInstance& inst, int n, int draws,
                                    double grid_step, std::uint64_t seed) {
  const auto a = powers(inst.d1, n);
  const auto b = powers(inst.d2, n);
  std::vector<std::vector<double>> ws;
  std::vector<std::vector<double>> vs;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < draws; ++i) {
    ws.push_back(dirichlet(a.size(), rng));
    vs.push_back(dirichlet(b.size(), rng));
  }

  std::vector<ComplexMatrix> root_w;
  for (const auto& w : ws) root_w.push_back(oracle_sqrt(combine(a, w)));
  std::vector<ComplexMatrix> root_v;
  for (const auto& v : vs) root_v.push_back(oracle_sqrt(combine(b, v)));

  double sup = 0.0;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    sup = std::max(sup, oracle_fidelity_from_roots(root_w[i], root_v[i]));
  }
  if (grid_step > 0.0) {
    const int k = grid_divisions(grid_step);
    std::vector<ComplexMatrix> gw;
    for (const auto& w : simplex_grid(a.size(), k)) gw.push_back(oracle_sqrt(combine(a, w)));
    std::vector<ComplexMatrix> gv;
    for (const auto& v : simplex_grid(b.size(), k)) gv.push_back(oracle_sqrt(combine(b, v)));
    for (const auto& x : gw) {
      for (const auto& y : gv) sup = std::max(sup, oracle_fidelity_from_roots(x, y));
    }
  }
  return sup;
}

SuiteReport inequality_suite(const SuiteConfig& cfg) {
  cfg.validate();
  auto wanted = [&](const char* name) {
    return cfg.only.empty() || std::find(cfg.only.begin(), cfg.only.end(), name) != cfg.only.end();
  };
  using Runner = void (*)(SuiteRun&);
  const std::pair<const char*, Runner> table[] = {
      {suites::kPowerExponential, run_power_exponential},
      {suites::kBinomialDecay, run_binomial_decay},
      {suites::kChernoffChain, run_chernoff_chain},
      {suites::kMixtureFidelity, run_mixture_fidelity},
      {suites::kHellingerChain, run_hellinger_chain},
  };
  SuiteReport report;
  for (const auto& [name, fn] : table) {
    if (!wanted(name)) continue;
    SuiteRun run{cfg, SuiteOutcome{}};
    run.out.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    fn(run);
    run.out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.suites.push_back(std::move(run.out));
  }
  return report;
}

}  // namespace cqht
