#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqht/bounds.hpp"
#include "cqht/discretize.hpp"
#include "cqht/error.hpp"
#include "cqht/instance_io.hpp"
#include "cqht/oracle.hpp"
#include "cqht/privacy.hpp"

namespace cqht::cli {

namespace {

using nlohmann::json;

enum class Format { Json, Csv };

struct CommonFlags {
  std::optional<double> delta;
  std::optional<double> p;
  std::optional<int> n_max;
  std::optional<int> fw_iters;
  std::optional<std::uint64_t> seed;
  Format format = Format::Json;
};

void add_instance_flags(CLI::App* app, CommonFlags& f) {
  app->add_option("--delta", f.delta, "Override the target error");
  app->add_option("--p", f.p, "Override the prior of hypothesis 1");
}

void add_solver_flags(CLI::App* app, CommonFlags& f) {
  app->add_option("--n-max", f.n_max, "Largest n scanned for n*")->check(CLI::PositiveNumber);
  app->add_option("--fw-iters", f.fw_iters, "Frank-Wolfe iteration cap")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", f.seed, "Seed for restarts and sampled checks");
}

void add_format_flag(CLI::App* app, CommonFlags& f) {
  const std::map<std::string, Format> names{{"json", Format::Json}, {"csv", Format::Csv}};
  app->add_option("--format", f.format, "json or csv")
      ->transform(CLI::CheckedTransformer(names, CLI::ignore_case));
}

SolverConfig solver_config(const CommonFlags& f) {
  SolverConfig cfg;
  if (f.n_max) cfg.n_max = *f.n_max;
  if (f.fw_iters) cfg.fw_max_iters = *f.fw_iters;
  if (f.seed) cfg.seed = *f.seed;
  cfg.validate();
  return cfg;
}

InstanceFile load(const std::string& path, const CommonFlags& f) {
  InstanceFile file = load_instance(path);
  if (f.delta) file.delta = *f.delta;
  if (f.p) file.p = *f.p;
  return file;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json error_json(ErrorCode code, const std::string& message) {
  return {{"code", std::string(to_string(code))}, {"message", message}};
}

json header(const InstanceFile& f) {
  const HypothesisInstance inst = f.instance();
  return {{"schema_version", kSchemaVersion},
          {"id", f.id},
          {"dim", f.dim},
          {"p", f.p},
          {"delta", f.delta},
          {"m1", inst.d1.size()},
          {"m2", inst.d2.size()}};
}

json sample_complexity_json(const SampleComplexity& s) {
  json j{{"kind", std::string(to_string(s.kind))}};
  switch (s.kind) {
    case SampleComplexity::Kind::Finite:
      j["n_star"] = s.n;
      j["error"] = s.best_error;
      break;
    case SampleComplexity::Kind::Infinite:
      j["n_star"] = "infinite";
      break;
    case SampleComplexity::Kind::CapExceeded:
      j["n_star"] = nullptr;
      j["n_evaluated"] = s.n;
      j["error"] = s.best_error;
      break;
  }
  j["errors"] = s.errors;
  return j;
}

void flatten(const json& j, const std::string& key,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), key.empty() ? it.key() : key + "." + it.key(), rows);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten(j[i], key + "[" + std::to_string(i) + "]", rows);
    }
  } else if (j.is_null()) {
    rows.emplace_back(key, "");
  } else if (j.is_number_float()) {
    rows.emplace_back(key, fmt(j.get<double>()));
  } else if (j.is_string()) {
    rows.emplace_back(key, j.get<std::string>());
  } else {
    rows.emplace_back(key, j.dump());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void emit(const json& j, Format format, std::ostream& out) {
  if (format == Format::Json) {
    out << j.dump(2) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  out << "field,value\n";
  for (const auto& [k, v] : rows) out << csv_field(k) << "," << csv_field(v) << "\n";
}

// ---------------------------------------------------------------- report

int cmd_report(const std::string& path, const CommonFlags& flags, std::ostream& out) {
  const InstanceFile f = load(path, flags);
  const SolverConfig cfg = solver_config(flags);
  const HypothesisInstance inst = f.instance();
  json j = header(f);

  const TrivialKind kind = classify_trivial(inst, f.delta);
  if (kind != TrivialKind::NonTrivial) {
    j["trivial"] = std::string(to_string(kind));
    if (kind == TrivialKind::Overlapping) {
      j["n_star"] = "infinite";
    } else {
      j["n_star"] = 1;
    }
    emit(j, flags.format, out);
    return kExitOk;
  }

  const BoundReport r = build_report(inst, f.delta, cfg, f.id);
  json lower = json::object();
  for (const auto& [k, v] : r.lower_bounds) lower[k] = number(v);
  json upper = json::object();
  for (const auto& [k, v] : r.upper_bounds) upper[k] = number(v);
  j["lower_bounds"] = lower;
  j["upper_bounds"] = upper;
  j["exact"] = sample_complexity_json(*r.exact);
  j["consistent"] = r.consistent;
  json stats{{"f_max", r.stats.f_max},
             {"f_min", r.stats.f_min},
             {"bures_min", r.stats.bures_min},
             {"h_half_inf", r.stats.h_half_inf},
             {"e1_inf", r.stats.e1_inf}};
  stats["overlap_max_psi"] =
      r.stats.overlap_max_psi ? json(*r.stats.overlap_max_psi) : json(nullptr);
  j["stats"] = stats;
  j["chernoff_s"] = r.chernoff_s ? json(*r.chernoff_s) : json(nullptr);
  j["qubit_a"] = r.qubit_a ? json(*r.qubit_a) : json(nullptr);
  emit(j, flags.format, out);
  return r.consistent ? kExitOk : kExitInconsistent;
}

// ----------------------------------------------------------------- sweep

enum class SweepVar { N, Delta, Epsilon };

struct SweepFlags {
  SweepVar var = SweepVar::Delta;
  std::optional<double> start;
  std::optional<double> stop;
  std::optional<int> count;
  std::vector<double> values;
  bool log = false;
  std::vector<std::string> columns;
  std::string out_path;
  std::string hellinger = "refuse";
  int threads = 0;
};

using Row = std::map<std::string, std::string>;

const std::vector<std::string>& sweep_columns(SweepVar var) {
  static const std::vector<std::string> n_cols{"n", "error", "fw_gap", "iterations", "finite_cap"};
  static const std::vector<std::string> delta_cols{
      "delta",          "classification",  "n_star",          "error_at_n_star",
      "lb_fidelity",    "lb_bures",        "lb",              "ub_chernoff",
      "ub_qsv_overlap", "ub_finite_cardinality", "ub_compact_qubit", "ub",
      "chernoff_s",     "qubit_a",         "consistent",      "scaling_ratio"};
  static const std::vector<std::string> eps_cols{
      "epsilon",       "q",          "dp_lower",    "dp_lower_trace", "dp_lower_hellinger",
      "hellinger_ok",  "dp_floor",   "dp_upper",    "witness_kind",   "witness_n",
      "witness_error", "ldp_passes", "ldp_max_divergence"};
  switch (var) {
    case SweepVar::N: return n_cols;
    case SweepVar::Delta: return delta_cols;
    case SweepVar::Epsilon: return eps_cols;
  }
  return n_cols;
}

std::vector<double> sweep_points(const SweepFlags& s) {
  std::vector<double> pts;
  if (!s.values.empty()) {
    if (s.start || s.stop || s.count) {
      throw Error(ErrorCode::PreconditionViolated, "--values excludes --start/--stop/--count");
    }
    pts = s.values;
    if (pts.size() < 2) throw Error(ErrorCode::PreconditionViolated, "sweep needs count >= 2");
    if (std::set<double>(pts.begin(), pts.end()).size() != pts.size()) {
      throw Error(ErrorCode::PreconditionViolated, "sweep values must be distinct");
    }
  } else {
    if (!s.start || !s.stop) {
      throw Error(ErrorCode::PreconditionViolated, "sweep needs --values or --start and --stop");
    }
    const double a = *s.start;
    const double b = *s.stop;
    if (!(a < b)) throw Error(ErrorCode::PreconditionViolated, "sweep needs start < stop");
    int count = 0;
    if (s.count) {
      count = *s.count;
    } else if (s.var == SweepVar::N) {
      count = static_cast<int>(std::llround(b - a)) + 1;
    } else {
      throw Error(ErrorCode::PreconditionViolated, "sweep needs --count");
    }
    if (count < 2) throw Error(ErrorCode::PreconditionViolated, "sweep needs count >= 2");
    if (s.log && !(a > 0.0)) {
      throw Error(ErrorCode::PreconditionViolated, "log spacing needs start > 0");
    }
    for (int i = 0; i < count; ++i) {
      const double t = static_cast<double>(i) / (count - 1);
      if (i == count - 1) {
        pts.push_back(b);
      } else if (s.log) {
        pts.push_back(a * std::pow(b / a, t));
      } else {
        pts.push_back(a + t * (b - a));
      }
    }
  }
  if (s.var == SweepVar::N) {
    for (double& x : pts) {
      if (std::abs(x - std::round(x)) > 1e-9 || x < 1.0) {
        throw Error(ErrorCode::PreconditionViolated, "n sweep points must be integers >= 1");
      }
      x = std::round(x);
    }
    if (std::set<double>(pts.begin(), pts.end()).size() != pts.size()) {
      throw Error(ErrorCode::PreconditionViolated, "n sweep points must be distinct");
    }
  }
  return pts;
}

Row n_row(const HypothesisInstance& inst, int n, const SolverConfig& cfg,
          const FidelityStats& stats) {
  const HelstromSolution sol = composite_error_n(inst, n, cfg);
  const double m = static_cast<double>(inst.d1.size() * inst.d2.size());
  return {{"n", std::to_string(n)},
          {"error", fmt(sol.error)},
          {"fw_gap", fmt(sol.fw_gap)},
          {"iterations", std::to_string(sol.iterations)},
          {"finite_cap", fmt(std::sqrt(m * inst.p * (1.0 - inst.p)) * std::pow(stats.f_max, n))}};
}

Row delta_row(const HypothesisInstance& inst, double delta, const SolverConfig& cfg) {
  Row row{{"delta", fmt(delta)}};
  const TrivialKind kind = classify_trivial(inst, delta);
  row["classification"] = std::string(to_string(kind));
  auto put_exact = [&](const SampleComplexity& s) {
    if (s.kind == SampleComplexity::Kind::Finite) {
      row["n_star"] = std::to_string(s.n);
      row["error_at_n_star"] = fmt(s.best_error);
    } else if (s.kind == SampleComplexity::Kind::Infinite) {
      row["n_star"] = "inf";
    }
  };
  if (kind != TrivialKind::NonTrivial) {
    put_exact(sample_complexity(inst, delta, cfg));
    return row;
  }
  const BoundReport r = build_report(inst, delta, cfg);
  put_exact(*r.exact);
  for (const auto& [k, v] : r.lower_bounds) row["lb_" + k] = fmt(v);
  for (const auto& [k, v] : r.upper_bounds) row["ub_" + k] = fmt(v);
  row["lb"] = fmt(r.max_lower());
  row["ub"] = fmt(r.min_upper());
  if (r.chernoff_s) row["chernoff_s"] = fmt(*r.chernoff_s);
  if (r.qubit_a) row["qubit_a"] = fmt(*r.qubit_a);
  row["consistent"] = r.consistent ? "true" : "false";
  if (r.exact->kind == SampleComplexity::Kind::Finite && r.stats.f_max > 0.0 &&
      r.stats.f_max < 1.0) {
    const double scale = std::log(1.0 / delta) / -std::log(r.stats.f_max);
    row["scaling_ratio"] = fmt(r.exact->n / scale);
  }
  return row;
}

Row epsilon_row(const HypothesisInstance& inst, double delta, double eps, bool refuse,
                const SolverConfig& cfg) {
  if (eps < 0.0) throw Error(ErrorCode::PreconditionViolated, "epsilon must be >= 0");
  Row row{{"epsilon", fmt(eps)}};
  const DpChannelSpec channel = DpChannelSpec::depolarizing(eps, inst.dim());
  row["q"] = fmt(channel.q);
  const DpLowerTerms t = dp_lower_terms(inst, delta, eps, HellingerPolicy::TraceTermOnly, cfg.tol);
  row["dp_lower_trace"] = fmt(t.trace_term);
  if (t.hellinger_term) row["dp_lower_hellinger"] = fmt(*t.hellinger_term);
  row["hellinger_ok"] = t.hellinger_constraint_holds ? "true" : "false";
  if (!refuse || t.hellinger_constraint_holds) row["dp_lower"] = fmt(t.value());
  row["dp_floor"] = fmt(dp_fidelity_floor(inst, eps, cfg.tol));
  if (eps > 0.0) row["dp_upper"] = std::to_string(dp_upper_bound(inst, delta, eps, cfg.tol));
  try {
    const SampleComplexity w = dp_exact_upper_witness(inst, delta, eps, cfg);
    row["witness_kind"] = std::string(to_string(w.kind));
    if (w.kind == SampleComplexity::Kind::Finite) {
      row["witness_n"] = std::to_string(w.n);
      row["witness_error"] = fmt(w.best_error);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::LdpCertificateFailed) throw;
    row["witness_kind"] = "certificate_failed";
  }
  const LdpCertificate cert = verify_ldp(channel, kDefaultLdpTrials, cfg.seed);
  row["ldp_passes"] = cert.passes ? "true" : "false";
  row["ldp_max_divergence"] = fmt(cert.max_divergence);
  return row;
}

// Rows land in their own slot, so output order never depends on scheduling.
std::vector<Row> evaluate_parallel(std::size_t count, int threads,
                                   const std::function<Row(std::size_t)>& eval) {
  std::vector<Row> rows(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        rows[i] = eval(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

int cmd_sweep(const std::string& path, const CommonFlags& flags, const SweepFlags& s,
              std::ostream& out) {
  if (s.hellinger != "refuse" && s.hellinger != "trace-only") {
    throw Error(ErrorCode::PreconditionViolated, "--hellinger must be refuse or trace-only");
  }
  const InstanceFile f = load(path, flags);
  const SolverConfig cfg = solver_config(flags);
  const HypothesisInstance inst = f.instance();

  const auto& all = sweep_columns(s.var);
  std::vector<std::string> cols = s.columns.empty() ? all : s.columns;
  for (const auto& c : cols) {
    if (std::find(all.begin(), all.end(), c) == all.end()) {
      std::string known;
      for (const auto& a : all) known += (known.empty() ? "" : ", ") + a;
      throw Error(ErrorCode::PreconditionViolated,
                  "unknown column '" + c + "' (available: " + known + ")");
    }
  }
  const std::vector<double> pts = sweep_points(s);

  std::function<Row(std::size_t)> eval;
  FidelityStats stats;
  switch (s.var) {
    case SweepVar::N:
      stats = fidelity_stats(inst, cfg.tol);
      eval = [&](std::size_t i) { return n_row(inst, static_cast<int>(pts[i]), cfg, stats); };
      break;
    case SweepVar::Delta:
      eval = [&](std::size_t i) { return delta_row(inst, pts[i], cfg); };
      break;
    case SweepVar::Epsilon:
      eval = [&](std::size_t i) {
        return epsilon_row(inst, f.delta, pts[i], s.hellinger == "refuse", cfg);
      };
      break;
  }
  const std::vector<Row> rows = evaluate_parallel(pts.size(), s.threads, eval);

  std::ostringstream csv;
  for (std::size_t c = 0; c < cols.size(); ++c) csv << (c ? "," : "") << cols[c];
  csv << "\n";
  for (const Row& row : rows) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto it = row.find(cols[c]);
      csv << (c ? "," : "") << (it == row.end() ? "" : csv_field(it->second));
    }
    csv << "\n";
  }
  if (s.out_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(s.out_path, std::ios::binary);
    if (!file) throw Error(ErrorCode::InputParse, "cannot open " + s.out_path + " for writing");
    file << csv.str();
    if (!file) throw Error(ErrorCode::InputParse, "failed writing " + s.out_path);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyFlags {
  std::uint64_t seed = 42;
  int trials = 1000;
  int instance_trials = 20;
  std::vector<std::string> suites;
  double rel_slack = 1e-9;
  double abs_slack = 1e-7;
  bool list = false;
};

int cmd_verify(const VerifyFlags& v, Format format, std::ostream& out) {
  if (v.list) {
    json names = all_suite_names();
    emit({{"schema_version", kSchemaVersion}, {"suites", names}}, format, out);
    return kExitOk;
  }
  SuiteConfig cfg;
  cfg.seed = v.seed;
  cfg.trials = v.trials;
  cfg.instance_trials = v.instance_trials;
  cfg.only = v.suites;
  cfg.rel_slack = v.rel_slack;
  cfg.abs_slack = v.abs_slack;
  const SuiteReport r = inequality_suite(cfg);

  json suites = json::array();
  for (const auto& s : r.suites) {
    json failures = json::array();
    for (const auto& f : s.failures) {
      failures.push_back({{"check", f.check},
                          {"seed", f.seed},
                          {"lhs", number(f.lhs)},
                          {"rhs", number(f.rhs)},
                          {"detail", f.detail}});
    }
    suites.push_back({{"name", s.name},
                      {"checks", s.checks},
                      {"passed", s.failures.empty()},
                      {"failures", failures},
                      {"notes", s.notes},
                      {"seconds", s.seconds}});
  }
  json j{{"schema_version", kSchemaVersion},
         {"seed", v.seed},
         {"passed", r.passed()},
         {"total_checks", r.total_checks()},
         {"total_failures", r.total_failures()},
         {"suites", suites}};
  emit(j, format, out);
  return r.passed() ? kExitOk : kExitInconsistent;
}

// -------------------------------------------------------------------- dp

struct DpFlags {
  std::optional<double> epsilon;
  std::string hellinger = "refuse";
  int ldp_trials = kDefaultLdpTrials;
};

int cmd_dp(const std::string& path, const CommonFlags& flags, const DpFlags& d,
           std::ostream& out) {
  const InstanceFile f = load(path, flags);
  const SolverConfig cfg = solver_config(flags);
  const HypothesisInstance inst = f.instance();
  const std::optional<double> eps = d.epsilon ? d.epsilon : f.epsilon;
  if (!eps) throw Error(ErrorCode::InputParse, "dp.epsilon: missing (or pass --epsilon)");
  if (*eps == 0.0) {
    throw Error(ErrorCode::EpsilonZero, "epsilon = 0 admits no finite private sample complexity");
  }
  if (!(*eps > 0.0) || !std::isfinite(*eps)) {
    throw Error(ErrorCode::PreconditionViolated, "epsilon must be a positive finite number");
  }
  const bool refuse = d.hellinger == "refuse";

  json j = header(f);
  j["epsilon"] = *eps;
  int code = kExitOk;

  const DpLowerTerms t = dp_lower_terms(inst, f.delta, *eps, HellingerPolicy::TraceTermOnly, cfg.tol);
  j["lower_terms"] = {{"trace", number(t.trace_term)},
                      {"hellinger", t.hellinger_term ? number(*t.hellinger_term) : json(nullptr)},
                      {"hellinger_constraint_holds", t.hellinger_constraint_holds}};
  std::optional<double> lower;
  if (refuse && !t.hellinger_constraint_holds) {
    j["lower"] = nullptr;
    j["lower_error"] = error_json(ErrorCode::HellingerConstraintViolated,
                                  "some cross pair has H_1/2 > 1; rerun with "
                                  "--hellinger trace-only to keep the trace term");
    code = kExitInput;
  } else {
    lower = t.value();
    j["lower"] = number(*lower);
  }
  j["floor"] = dp_fidelity_floor(inst, *eps, cfg.tol);
  const std::int64_t upper = dp_upper_bound(inst, f.delta, *eps, cfg.tol);
  j["upper_formula"] = upper;

  const DpChannelSpec channel = DpChannelSpec::depolarizing(*eps, inst.dim());
  j["channel"] = {{"kind", std::string(to_string(channel.kind))}, {"q", channel.q}};
  const LdpCertificate cert = verify_ldp(channel, d.ldp_trials, cfg.seed);
  j["ldp_certificate"] = {{"max_divergence", number(cert.max_divergence)},
                          {"resolution", cert.resolution},
                          {"trials", d.ldp_trials},
                          {"passes", cert.passes}};

  bool consistent = cert.passes;
  try {
    const SampleComplexity w = dp_exact_upper_witness(inst, f.delta, *eps, cfg);
    j["witness"] = sample_complexity_json(w);
    if (w.kind == SampleComplexity::Kind::Finite) {
      const double n = static_cast<double>(w.n);
      if (lower && *lower > n + 1e-9) consistent = false;
      if (w.n > upper) consistent = false;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::LdpCertificateFailed) throw;
    j["witness"] = {{"error", error_json(e.code(), e.detail())}};
    code = kExitInput;
  }
  j["consistent"] = consistent;
  emit(j, flags.format, out);
  if (code != kExitOk) return code;
  return consistent ? kExitOk : kExitInconsistent;
}

// ------------------------------------------------------------ discretize

struct DiscretizeFlags {
  std::vector<double> center{0.0, 0.0, 0.0};
  double radius = 1.0;
  bool surface = false;
  int points = 64;
  int shells = 4;
  int probes = 20000;
  std::uint64_t seed = 42;
  std::string into;
  int set = 2;
  std::string id;
  std::string out_path;
};

json state_json(const DensityMatrix& rho) {
  json rows = json::array();
  const ComplexMatrix& m = rho.mat();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::InputParse, "cannot open " + path + " for writing");
  file << text;
  if (!file) throw Error(ErrorCode::InputParse, "failed writing " + path);
}

int cmd_discretize(const DiscretizeFlags& d, std::ostream& out, std::ostream& err) {
  if (d.center.size() != 3) {
    throw Error(ErrorCode::PreconditionViolated, "--center takes three coordinates x,y,z");
  }
  BlochNetSpec spec;
  spec.center = {d.center[0], d.center[1], d.center[2]};
  spec.radius = d.radius;
  spec.region = d.surface ? BlochRegion::Sphere : BlochRegion::Ball;
  spec.points = d.points;
  spec.shells = d.shells;
  const BlochNet net = bloch_net(spec, d.probes, d.seed);

  json summary{{"schema_version", kSchemaVersion},
               {"dim", 2},
               {"region", d.surface ? "sphere" : "ball"},
               {"center", d.center},
               {"radius", d.radius},
               {"count", net.states.size()},
               {"covering_radius", net.covering_radius},
               {"probes", net.probes},
               {"seed", d.seed}};

  if (d.into.empty()) {
    json bloch = json::array();
    json states = json::array();
    for (std::size_t i = 0; i < net.states.size(); ++i) {
      bloch.push_back(net.bloch[i]);
      states.push_back(state_json(net.states[i]));
    }
    summary["bloch"] = bloch;
    summary["states"] = states;
    const std::string text = summary.dump(2) + "\n";
    if (d.out_path.empty()) {
      out << text;
    } else {
      write_text(d.out_path, text);
    }
    return kExitOk;
  }

  if (d.set != 1 && d.set != 2) throw Error(ErrorCode::PreconditionViolated, "--set is 1 or 2");
  InstanceFile f = load_instance(d.into);
  if (f.dim != 2) throw Error(ErrorCode::DimensionMismatch, "discretize covers qubits only");
  (d.set == 1 ? f.set1 : f.set2) = net.states;
  if (!d.id.empty()) f.id = d.id;
  f.instance();
  const std::string text = write_instance(f);
  if (d.out_path.empty()) {
    out << text;
    err << summary.dump() << "\n";
  } else {
    write_text(d.out_path, text);
    out << summary.dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sample complexity of composite quantum hypothesis testing"};
  app.name("cqht");
  app.require_subcommand(1);

  CommonFlags common;
  std::string instance_path;

  auto* report = app.add_subcommand("report", "Bounds, exact n* and consistency for one instance");
  report->add_option("instance", instance_path, "Instance JSON file")->required();
  add_instance_flags(report, common);
  add_solver_flags(report, common);
  add_format_flag(report, common);

  SweepFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "CSV table over n, delta or epsilon");
  sweep->add_option("instance", instance_path, "Instance JSON file")->required();
  const std::map<std::string, SweepVar> vars{
      {"n", SweepVar::N}, {"delta", SweepVar::Delta}, {"epsilon", SweepVar::Epsilon}};
  sweep->add_option("--var", sweep_flags.var, "n, delta or epsilon")
      ->required()
      ->transform(CLI::CheckedTransformer(vars, CLI::ignore_case));
  sweep->add_option("--start", sweep_flags.start);
  sweep->add_option("--stop", sweep_flags.stop);
  sweep->add_option("--count", sweep_flags.count);
  sweep->add_option("--values", sweep_flags.values, "Explicit points, comma separated")
      ->delimiter(',');
  sweep->add_flag("--log", sweep_flags.log, "Geometric spacing between start and stop");
  sweep->add_option("--columns", sweep_flags.columns, "Subset of columns, comma separated")
      ->delimiter(',');
  sweep->add_option("--out", sweep_flags.out_path, "Write CSV here instead of stdout");
  sweep->add_option("--hellinger", sweep_flags.hellinger, "refuse or trace-only");
  sweep->add_option("--threads", sweep_flags.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  add_instance_flags(sweep, common);
  add_solver_flags(sweep, common);

  VerifyFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "Run the seeded inequality suites");
  verify->add_option("--seed", verify_flags.seed);
  verify->add_option("--trials", verify_flags.trials)->check(CLI::PositiveNumber);
  verify->add_option("--instance-trials", verify_flags.instance_trials)
      ->check(CLI::PositiveNumber);
  verify->add_option("--suite", verify_flags.suites, "Run only these suites (repeatable)")
      ->delimiter(',');
  verify->add_option("--rel-slack", verify_flags.rel_slack);
  verify->add_option("--abs-slack", verify_flags.abs_slack);
  verify->add_flag("--list", verify_flags.list, "Print suite names and exit");
  add_format_flag(verify, common);

  DpFlags dp_flags;
  auto* dp = app.add_subcommand("dp", "Private sample complexity bounds and witness");
  dp->add_option("instance", instance_path, "Instance JSON file")->required();
  dp->add_option("--epsilon", dp_flags.epsilon, "Override dp.epsilon");
  dp->add_option("--hellinger", dp_flags.hellinger, "refuse or trace-only")
      ->check(CLI::IsMember({"refuse", "trace-only"}));
  dp->add_option("--ldp-trials", dp_flags.ldp_trials)->check(CLI::PositiveNumber);
  add_instance_flags(dp, common);
  add_solver_flags(dp, common);
  add_format_flag(dp, common);

  DiscretizeFlags disc;
  auto* discretize = app.add_subcommand("discretize", "Finite net of a qubit Bloch region");
  discretize->add_option("--center", disc.center, "Bloch vector x,y,z")->delimiter(',');
  discretize->add_option("--radius", disc.radius);
  discretize->add_flag("--surface", disc.surface, "Net the sphere only (pure states if radius 1)");
  discretize->add_option("--points", disc.points, "Points on the outer shell");
  discretize->add_option("--shells", disc.shells);
  discretize->add_option("--probes", disc.probes, "Samples for the covering-radius estimate");
  discretize->add_option("--seed", disc.seed);
  discretize->add_option("--into", disc.into, "Instance file whose set is replaced by the net");
  discretize->add_option("--set", disc.set, "1 or 2");
  discretize->add_option("--id", disc.id);
  discretize->add_option("--out", disc.out_path);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "cqht: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*report) return cmd_report(instance_path, common, out);
    if (*sweep) return cmd_sweep(instance_path, common, sweep_flags, out);
    if (*verify) return cmd_verify(verify_flags, common.format, out);
    if (*dp) return cmd_dp(instance_path, common, dp_flags, out);
    if (*discretize) return cmd_discretize(disc, out, err);
  } catch (const Error& e) {
    if (common.format == Format::Json && !*sweep && !*discretize) {
      out << json{{"schema_version", kSchemaVersion}, {"error", error_json(e.code(), e.detail())}}
                 .dump(2)
          << "\n";
    }
    err << "cqht: " << to_string(e.code()) << ": " << e.detail() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "cqht: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace cqht::cli
