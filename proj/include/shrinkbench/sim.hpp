#pragma once

// Monte Carlo relative-efficiency experiments: equicorrelated Gaussian
// designs, coefficient vectors indexed by the noncentrality Delta^2, replicated
// estimation and MSE aggregation.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "shrinkbench/distributions.hpp"
#include "shrinkbench/error.hpp"
#include "shrinkbench/estimators.hpp"
#include "shrinkbench/linalg.hpp"
#include "shrinkbench/penalty.hpp"

namespace shrinkbench {

/// Raised when an estimator fails inside a simulation cell; the message names
/// the cell, replication and estimator.
class CellFailure : public Error {
public:
  CellFailure(const std::string& what, double delta2, long rep)
      : Error(what), delta2_(delta2), rep_(rep) {}
  double delta2() const noexcept { return delta2_; }
  long rep() const noexcept { return rep_; }

private:
  double delta2_;
  long rep_;
};

enum class Delta2Mapping {
  Noncentrality,  ///< Delta^2 = n beta' Sigma beta / sigma^2
  Euclidean,      ///< Delta^2 = beta' beta / sigma^2
};

inline std::string_view to_string(Delta2Mapping m) {
  return m == Delta2Mapping::Noncentrality ? "noncentrality" : "euclidean";
}

/// Ridge tuning in simulations. kappa lives on the X'X / n scale, so the
/// penalty added to the unscaled Gram matrix is n * kappa.
struct KappaRule {
  bool plugin = true;  ///< kappa = p / max(L_n - p, 1e-6)
  double fixed = 0.0;

  std::string label() const {
    if (plugin) return "plugin";
    char buf[64];
    std::snprintf(buf, sizeof buf, "fixed:%g", fixed);
    return buf;
  }
};

inline std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// One estimator column of an experiment: the estimator plus its tuning level.
struct EstimatorSpec {
  EstimatorId id = EstimatorId::LSE;
  double alpha = 0.0;  ///< PTE / IPT test level
  double mix = 0.0;    ///< EN L1 share

  /// Short column name: PT(0.05), EN25, ...
  std::string display_name() const {
    switch (id) {
      case EstimatorId::PTE: return "PT(" + format_g(alpha) + ")";
      case EstimatorId::IPT: return "IPT(" + format_g(alpha) + ")";
      case EstimatorId::EN: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "EN%02d", static_cast<int>(std::lround(mix * 100)));
        return buf;
      }
      default: return std::string(to_string(id));
    }
  }

  friend bool operator==(const EstimatorSpec&, const EstimatorSpec&) = default;
};

/// Canonical row order: estimator enum order, then tuning level.
inline bool estimator_order(const EstimatorSpec& a, const EstimatorSpec& b) {
  if (a.id != b.id) return static_cast<int>(a.id) < static_cast<int>(b.id);
  if (a.alpha != b.alpha) return a.alpha < b.alpha;
  return a.mix < b.mix;
}

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline double parse_level(std::string_view text, const std::string& token) {
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ConfigError("estimator '" + token + "': cannot parse level '" + s + "'");
  return v;
}

}  // namespace detail

/// Parses one estimator token: lse, re, pte:<alpha>, ipt:<alpha>, s, s+, rr,
/// lasso, alasso, scad, en:<mix>, or the table names en25/en50/en75. PTE and
/// IPT default to alpha 0.05, EN to mix 0.5.
inline EstimatorSpec parse_estimator(std::string_view token_in) {
  const std::string token = detail::lower(token_in);
  const auto colon = token.find(':');
  const std::string name = token.substr(0, colon);
  const std::optional<std::string> level =
      colon == std::string::npos ? std::nullopt : std::optional<std::string>(token.substr(colon + 1));
  auto no_level = [&](EstimatorId id) {
    if (level) throw ConfigError("estimator '" + token + "' takes no level");
    return EstimatorSpec{id, 0.0, 0.0};
  };
  EstimatorSpec spec;
  if (name == "lse") return no_level(EstimatorId::LSE);
  if (name == "re") return no_level(EstimatorId::RE);
  if (name == "s") return no_level(EstimatorId::S);
  if (name == "s+" || name == "splus" || name == "prse") return no_level(EstimatorId::SPLUS);
  if (name == "rr" || name == "ridge") return no_level(EstimatorId::RR);
  if (name == "lasso") return no_level(EstimatorId::LASSO);
  if (name == "alasso") return no_level(EstimatorId::ALASSO);
  if (name == "scad") return no_level(EstimatorId::SCAD);
  if (name == "pte" || name == "pt" || name == "ipt") {
    spec.id = name == "ipt" ? EstimatorId::IPT : EstimatorId::PTE;
    spec.alpha = level ? detail::parse_level(*level, token) : 0.05;
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
      throw ConfigError("estimator '" + token + "': alpha must lie in (0, 1)");
    return spec;
  }
  if (name == "en" || (name.size() == 4 && name.rfind("en", 0) == 0)) {
    spec.id = EstimatorId::EN;
    if (name == "en")
      spec.mix = level ? detail::parse_level(*level, token) : 0.5;
    else if (level)
      throw ConfigError("estimator '" + token + "' takes no level");
    else
      spec.mix = detail::parse_level(name.substr(2), token) / 100.0;
    if (!(spec.mix > 0.0 && spec.mix <= 1.0))
      throw ConfigError("estimator '" + token + "': mix must lie in (0, 1]");
    return spec;
  }
  throw ConfigError("unknown estimator '" + std::string(token_in) + "'");
}

/// Comma-separated estimator list. LSE is always included since every
/// relative efficiency is measured against it. Duplicates are dropped.
inline std::vector<EstimatorSpec> parse_estimator_list(std::string_view list) {
  std::vector<EstimatorSpec> out{{EstimatorId::LSE, 0.0, 0.0}};
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    std::string_view tok = list.substr(start, comma - start);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
    if (tok.empty()) throw ConfigError("empty entry in estimator list");
    const EstimatorSpec e = parse_estimator(tok);
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
    start = comma + 1;
  }
  std::sort(out.begin(), out.end(), estimator_order);
  return out;
}

/// The default 23-point noncentrality grid.
inline std::vector<double> standard_delta2_grid() {
  return {0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1, 1.5,
          2, 3,   5,   10,  15,  20,  25,  30,  35,  40,  50};
}

struct SimConfig {
  int n = 100;
  int p = 10;
  std::optional<int> k;  ///< number of nonzero coefficients; p when unset
  double r = 0.0;        ///< equicorrelation of the predictors
  std::vector<double> delta2_grid = standard_delta2_grid();
  int reps = 2000;
  double sigma = 5.0;
  std::uint64_t seed = 20140101;
  std::vector<EstimatorSpec> estimators = parse_estimator_list("re,s,s+");
  bool fixed_design = false;  ///< draw X once per cell instead of once per replication
  Delta2Mapping mapping = Delta2Mapping::Noncentrality;
  KappaRule kappa;
  int folds = 10;
  int n_lambda = 50;
  /// When set, the nonzero coefficients are this constant instead of being
  /// solved from Delta^2; the reported Delta^2 is then the implied value.
  std::optional<double> unit_signal;

  int signal_count() const { return k.value_or(p); }

  void validate() const {
    if (p < 1) throw ConfigError("p must be >= 1");
    if (n <= p) throw ConfigError("n must exceed p (n=" + std::to_string(n) + ", p=" + std::to_string(p) + ")");
    if (k && (*k < 0 || *k > p)) throw ConfigError("k must lie in [0, p]");
    if (!(r >= 0.0 && r < 1.0)) throw ConfigError("r must lie in [0, 1)");
    if (reps < 1) throw ConfigError("reps must be >= 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be finite and > 0");
    if (unit_signal) {
      if (!(*unit_signal >= 0.0) || !std::isfinite(*unit_signal))
        throw ConfigError("unit signal must be finite and >= 0");
    } else {
      if (delta2_grid.empty()) throw ConfigError("Delta^2 grid is empty");
      for (double d : delta2_grid) {
        if (!(d >= 0.0) || !std::isfinite(d)) throw ConfigError("Delta^2 values must be finite and >= 0");
        if (d > 0.0 && signal_count() == 0)
          throw InconsistentConfig("Delta^2 = " + format_g(d) + " > 0 needs k >= 1");
      }
    }
    if (estimators.empty()) throw ConfigError("no estimators requested");
    if (!kappa.plugin && (!(kappa.fixed >= 0.0) || !std::isfinite(kappa.fixed)))
      throw ConfigError("fixed kappa must be finite and >= 0");
    for (const EstimatorSpec& e : estimators) {
      const bool stein_type = e.id == EstimatorId::S || e.id == EstimatorId::SPLUS || e.id == EstimatorId::IPT;
      if (stein_type && p < 3) throw ConfigError(e.display_name() + " needs p >= 3");
      const bool penalized = e.id == EstimatorId::LASSO || e.id == EstimatorId::ALASSO ||
                             e.id == EstimatorId::SCAD || e.id == EstimatorId::EN;
      if (penalized) {
        if (folds < 2 || folds > n) throw ConfigError("folds must lie in [2, n]");
        if (n / folds < 2) throw FoldTooSmall("n / folds < 2");
        if (n_lambda < 2) throw ConfigError("n_lambda must be >= 2");
      }
    }
  }
};

/// Independent, reproducible random stream for one (seed, stream id) pair.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                      0x5eedu};
    engine_.seed(seq);
  }

  double normal() { return normal_(engine_); }
  std::uint64_t next_u64() { return engine_(); }
  std::mt19937_64& engine() noexcept { return engine_; }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Sigma with unit diagonal and constant off-diagonal r.
inline Matrix equicorrelation(int p, double r) {
  if (p < 1) throw DomainError("equicorrelation: p must be >= 1");
  Matrix s(static_cast<std::size_t>(p), static_cast<std::size_t>(p), r);
  for (int j = 0; j < p; ++j) s(j, j) = 1.0;
  return s;
}

/// n iid rows from N(0, Sigma), Sigma equicorrelated, using the closed-form
/// square root sqrt(1-r) I + (sqrt(1+(p-1)r) - sqrt(1-r)) J / p.
inline Matrix gen_design(int n, int p, double r, RngStream& rng) {
  if (n < 1 || p < 1) throw DomainError("gen_design: n and p must be >= 1");
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("gen_design: r must lie in [0, 1)");
  const double a = std::sqrt(1.0 - r);
  const double b = (std::sqrt(1.0 + (p - 1) * r) - a) / p;
  Matrix x(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
  Vector z(static_cast<std::size_t>(p));
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (double& v : z) {
      v = rng.normal();
      sum += v;
    }
    auto row = x.row(static_cast<std::size_t>(i));
    for (int j = 0; j < p; ++j) row[j] = a * z[j] + b * sum;
  }
  return x;
}

/// beta = c (1_k, 0_{p-k}) with c >= 0 chosen so that the mapping reproduces delta2.
inline Vector beta_from_delta(int p, int k, double delta2, const Matrix& sigma_x, int n, double sigma,
                              Delta2Mapping mapping = Delta2Mapping::Noncentrality) {
  if (k < 0 || k > p) throw ConfigError("beta_from_delta: k must lie in [0, p]");
  if (!(delta2 >= 0.0) || !std::isfinite(delta2)) throw DomainError("beta_from_delta: Delta^2 must be >= 0");
  if (delta2 > 0.0 && k == 0) throw InconsistentConfig("beta_from_delta: Delta^2 > 0 with k = 0");
  Vector beta(static_cast<std::size_t>(p), 0.0);
  if (delta2 == 0.0) return beta;
  double c = 0.0;
  if (mapping == Delta2Mapping::Euclidean) {
    c = sigma * std::sqrt(delta2 / k);
  } else {
    if (sigma_x.rows() != static_cast<std::size_t>(p) || sigma_x.cols() != static_cast<std::size_t>(p))
      throw DimensionMismatch("beta_from_delta: Sigma must be p x p");
    double quad = 0.0;  // 1_k' Sigma_kk 1_k
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) quad += sigma_x(i, j);
    if (!(quad > 0.0)) throw DomainError("beta_from_delta: Sigma is not positive on the signal block");
    c = sigma * std::sqrt(delta2 / (static_cast<double>(n) * quad));
  }
  for (int j = 0; j < k; ++j) beta[static_cast<std::size_t>(j)] = c;
  return beta;
}

/// Delta^2 implied by a coefficient vector under the given mapping.
inline double implied_delta2(std::span<const double> beta, const Matrix& sigma_x, int n, double sigma,
                             Delta2Mapping mapping = Delta2Mapping::Noncentrality) {
  if (mapping == Delta2Mapping::Euclidean) return squared_norm(beta) / (sigma * sigma);
  return n * dot(beta, sigma_x * beta) / (sigma * sigma);
}

struct CellEntry {
  EstimatorSpec estimator;
  double mse = 0.0;
};

struct EfficiencyRow {
  double delta2 = 0.0;
  EstimatorSpec estimator;
  std::string tuning;
  double mse = 0.0;
  double rel_eff = 1.0;  ///< +inf when mse is 0, NaN when both MSEs are 0
};

struct EfficiencyTable {
  std::vector<EfficiencyRow> rows;

  const EfficiencyRow* find(double delta2, const EstimatorSpec& e) const {
    for (const EfficiencyRow& row : rows)
      if (row.delta2 == delta2 && row.estimator == e) return &row;
    return nullptr;
  }
};

/// Tuning column text for an estimator under a configuration.
inline std::string tuning_label(const EstimatorSpec& e, const SimConfig& cfg) {
  switch (e.id) {
    case EstimatorId::PTE:
    case EstimatorId::IPT: return "alpha=" + format_g(e.alpha);
    case EstimatorId::RR: return "kappa=" + cfg.kappa.label();
    case EstimatorId::LASSO: return "lambda=cv" + std::to_string(cfg.folds);
    case EstimatorId::ALASSO: return "gamma=1;lambda=cv" + std::to_string(cfg.folds);
    case EstimatorId::SCAD: return "a=3.7;lambda=cv" + std::to_string(cfg.folds);
    case EstimatorId::EN: return "mix=" + format_g(e.mix) + ";lambda=cv" + std::to_string(cfg.folds);
    default: return "";
  }
}

/// Worker threads: hardware concurrency, capped by SHRINKBENCH_THREADS.
inline int default_thread_count() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("SHRINKBENCH_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1)
      throw ConfigError(std::string("SHRINKBENCH_THREADS must be a positive integer, got '") + env + "'");
    n = std::min<long>(n, cap);
  }
  return n;
}

namespace detail {

// Squared estimation errors of every requested estimator on one data set.
inline void replicate_errors(const SimConfig& cfg, const Matrix& x, const Vector& beta, RngStream& rng,
                             const std::vector<double>& crit, double* out) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  Vector y = x * beta;
  for (std::size_t i = 0; i < n; ++i) y[i] += cfg.sigma * rng.normal();
  const std::uint64_t fold_seed = rng.next_u64();

  const RegressionData data(x, std::move(y));
  const Vector b = lse(data).beta;
  const TestResult t = test_statistic_for(data, b);

  for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
    const EstimatorSpec& spec = cfg.estimators[e];
    Vector est;
    switch (spec.id) {
      case EstimatorId::LSE: est = b; break;
      case EstimatorId::RE: est.assign(p, 0.0); break;
      case EstimatorId::PTE: est = pte(b, t, spec.alpha, crit[e]).beta; break;
      case EstimatorId::IPT: est = ipt(b, t, spec.alpha, crit[e]).beta; break;
      case EstimatorId::S: est = stein(b, t).beta; break;
      case EstimatorId::SPLUS: est = prse(b, t).beta; break;
      case EstimatorId::RR: {
        const double kappa =
            cfg.kappa.plugin ? static_cast<double>(p) / std::max(t.statistic - static_cast<double>(p), 1e-6)
                             : cfg.kappa.fixed;
        est = ridge(data, static_cast<double>(n) * kappa).beta;
        break;
      }
      case EstimatorId::LASSO:
      case EstimatorId::ALASSO:
      case EstimatorId::SCAD:
      case EstimatorId::EN: {
        PenaltySpec ps = spec.id == EstimatorId::LASSO    ? PenaltySpec::lasso()
                         : spec.id == EstimatorId::ALASSO ? PenaltySpec::adaptive_lasso(1.0)
                         : spec.id == EstimatorId::SCAD   ? PenaltySpec::scad(3.7)
                                                          : PenaltySpec::elastic_net(spec.mix);
        PenalizedFitOptions opt;
        opt.folds = cfg.folds;
        opt.n_lambda = cfg.n_lambda;
        est = fit_penalized(data.x(), data.y(), ps, fold_seed, opt).beta;
        break;
      }
    }
    out[e] = squared_distance(est, beta);
  }
}

}  // namespace detail

/// Runs every replication of one Delta^2 cell and returns each estimator's MSE.
/// Replication t (counted from 1) draws from RngStream(seed, t); per-replication errors are
/// stored and summed in replication order, so the result does not depend on
/// the thread count.
inline std::vector<CellEntry> run_cell(const SimConfig& cfg, double delta2, int threads = 0) {
  cfg.validate();
  const std::size_t ne = cfg.estimators.size();
  const Matrix sigma_x = equicorrelation(cfg.p, cfg.r);
  const int k = cfg.signal_count();
  Vector beta;
  if (cfg.unit_signal) {
    beta.assign(static_cast<std::size_t>(cfg.p), 0.0);
    for (int j = 0; j < k; ++j) beta[static_cast<std::size_t>(j)] = *cfg.unit_signal;
  } else {
    beta = beta_from_delta(cfg.p, k, delta2, sigma_x, cfg.n, cfg.sigma, cfg.mapping);
  }

  std::vector<double> crit(ne, 0.0);
  for (std::size_t e = 0; e < ne; ++e)
    if (cfg.estimators[e].id == EstimatorId::PTE || cfg.estimators[e].id == EstimatorId::IPT)
      crit[e] = central_quantile(cfg.estimators[e].alpha, cfg.p);

  std::optional<Matrix> shared_x;
  if (cfg.fixed_design) {
    RngStream design_rng(cfg.seed, 0);
    shared_x = gen_design(cfg.n, cfg.p, cfg.r, design_rng);
  }

  const std::size_t reps = static_cast<std::size_t>(cfg.reps);
  std::vector<double> errors(reps * ne, 0.0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex fail_mu;
  std::size_t fail_rep = reps;
  std::exception_ptr fail_ptr;

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= reps || failed.load()) return;
      try {
        RngStream rng(cfg.seed, t + 1);
        if (shared_x) {
          detail::replicate_errors(cfg, *shared_x, beta, rng, crit, errors.data() + t * ne);
        } else {
          const Matrix x = gen_design(cfg.n, cfg.p, cfg.r, rng);
          detail::replicate_errors(cfg, x, beta, rng, crit, errors.data() + t * ne);
        }
      } catch (...) {
        std::lock_guard lock(fail_mu);
        if (t < fail_rep) {
          fail_rep = t;
          fail_ptr = std::current_exception();
        }
        failed.store(true);
      }
    }
  };

  const int nthreads = std::clamp(threads > 0 ? threads : default_thread_count(), 1, cfg.reps);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (fail_ptr) {
    const std::string where =
        "cell Delta^2=" + format_g(delta2) + ", replication " + std::to_string(fail_rep + 1) + ": ";
    try {
      std::rethrow_exception(fail_ptr);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    } catch (const std::exception& e) {
      throw CellFailure(where + e.what(), delta2, static_cast<long>(fail_rep + 1));
    }
  }

  std::vector<CellEntry> out;
  out.reserve(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    double sum = 0.0;
    for (std::size_t t = 0; t < reps; ++t) sum += errors[t * ne + e];
    out.push_back({cfg.estimators[e], sum / static_cast<double>(reps)});
  }
  return out;
}

/// MSE(LSE) / MSE: +inf when the estimator is exact, NaN when both are.
inline double relative_efficiency(double mse_lse, double mse) {
  if (mse == 0.0) return mse_lse == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                        : std::numeric_limits<double>::infinity();
  return mse_lse / mse;
}

/// Every cell of the grid, rows sorted by (Delta^2, estimator).
inline EfficiencyTable run_experiment(const SimConfig& cfg_in, int threads = 0) {
  SimConfig cfg = cfg_in;
  if (std::find_if(cfg.estimators.begin(), cfg.estimators.end(),
                   [](const EstimatorSpec& e) { return e.id == EstimatorId::LSE; }) == cfg.estimators.end())
    cfg.estimators.push_back({EstimatorId::LSE, 0.0, 0.0});
  std::sort(cfg.estimators.begin(), cfg.estimators.end(), estimator_order);
  cfg.estimators.erase(std::unique(cfg.estimators.begin(), cfg.estimators.end()), cfg.estimators.end());
  cfg.validate();

  std::vector<double> grid = cfg.delta2_grid;
  if (cfg.unit_signal) {
    Vector beta(static_cast<std::size_t>(cfg.p), 0.0);
    for (int j = 0; j < cfg.signal_count(); ++j) beta[static_cast<std::size_t>(j)] = *cfg.unit_signal;
    grid = {implied_delta2(beta, equicorrelation(cfg.p, cfg.r), cfg.n, cfg.sigma, cfg.mapping)};
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  EfficiencyTable table;
  for (double d2 : grid) {
    const std::vector<CellEntry> cell = run_cell(cfg, d2, threads);
    double mse_lse = 0.0;
    for (const CellEntry& c : cell)
      if (c.estimator.id == EstimatorId::LSE) mse_lse = c.mse;
    for (const CellEntry& c : cell) {
      const double re = c.estimator.id == EstimatorId::LSE ? 1.0 : relative_efficiency(mse_lse, c.mse);
      table.rows.push_back({d2, c.estimator, tuning_label(c.estimator, cfg), c.mse, re});
    }
  }
  return table;
}

}  // namespace shrinkbench
