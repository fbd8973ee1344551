#pragma once

// Penalized least squares by cyclic coordinate descent: LASSO, adaptive LASSO,
// SCAD and elastic net, with regularization paths and K-fold cross-validation.
//
// All fits minimize
//
//     (1 / 2n) ||ys - Xs b||^2 + penalty(b)
//
// on standardized data (columns centered and scaled so that x_j'x_j / n = 1,
// response centered). Relative to an unnormalized sum of squares the penalty
// level differs by a factor 2n. Penalties at level lambda:
//
//     LASSO   lambda * sum |b_j|
//     aLASSO  lambda * sum w_j |b_j|
//     EN      lambda * (mix * sum |b_j| + (1 - mix) * sum b_j^2)     (ridge part not halved)
//     SCAD    sum P(|b_j|; lambda, a)

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "shrinkbench/error.hpp"
#include "shrinkbench/estimators.hpp"
#include "shrinkbench/linalg.hpp"

namespace shrinkbench {

enum class PenaltyKind { LASSO, ALASSO, SCAD, EN };

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::LASSO;
  double mix = 1.0;      ///< elastic-net L1 share; 1 for the pure L1 penalties
  double scad_a = 3.7;   ///< SCAD concavity parameter, > 2
  double gamma = 1.0;    ///< adaptive-LASSO weight exponent
  std::optional<Vector> weights;  ///< adaptive-LASSO weights; derived from an LSE pilot when absent

  static PenaltySpec lasso() { return {}; }
  static PenaltySpec adaptive_lasso(double gamma = 1.0) {
    PenaltySpec s;
    s.kind = PenaltyKind::ALASSO;
    s.gamma = gamma;
    return s;
  }
  static PenaltySpec scad(double a = 3.7) {
    PenaltySpec s;
    s.kind = PenaltyKind::SCAD;
    s.scad_a = a;
    return s;
  }
  static PenaltySpec elastic_net(double mix) {
    PenaltySpec s;
    s.kind = PenaltyKind::EN;
    s.mix = mix;
    return s;
  }

  void validate() const {
    if (!(mix > 0.0 && mix <= 1.0)) throw DomainError("PenaltySpec: mix must lie in (0, 1]");
    if (!(scad_a > 2.0)) throw DomainError("PenaltySpec: scad_a must be > 2");
    if (!(gamma > 0.0)) throw DomainError("PenaltySpec: gamma must be > 0");
    if (weights)
      for (double w : *weights)
        if (!(w > 0.0) || !std::isfinite(w))
          throw DomainError("PenaltySpec: weights must be finite and > 0");
  }

  bool convex() const noexcept { return kind != PenaltyKind::SCAD; }
};

inline EstimatorId estimator_id(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::LASSO: return EstimatorId::LASSO;
    case PenaltyKind::ALASSO: return EstimatorId::ALASSO;
    case PenaltyKind::SCAD: return EstimatorId::SCAD;
    case PenaltyKind::EN: return EstimatorId::EN;
  }
  return EstimatorId::LASSO;
}

/// Centered and scaled copy of a regression problem, with the Gram matrix
/// Xs'Xs / n and correlations Xs'ys / n that coordinate descent works from.
struct StandardizedData {
  Matrix xs;
  Vector ys;
  Vector col_means;
  Vector col_scales;
  double y_mean = 0.0;
  Matrix cov;   ///< Xs'Xs / n
  Vector corr;  ///< Xs'ys / n

  std::size_t n() const noexcept { return xs.rows(); }
  std::size_t p() const noexcept { return xs.cols(); }

  /// Coefficients on the original predictor scale.
  Vector to_original(std::span<const double> beta_std) const {
    Vector b(beta_std.size());
    for (std::size_t j = 0; j < b.size(); ++j) b[j] = beta_std[j] / col_scales[j];
    return b;
  }

  double intercept(std::span<const double> beta_std) const {
    double a = y_mean;
    for (std::size_t j = 0; j < beta_std.size(); ++j)
      a -= col_means[j] * beta_std[j] / col_scales[j];
    return a;
  }
};

/// Column scales use the 1/n convention, so every standardized column has
/// x_j'x_j / n = 1.
inline StandardizedData standardize(const Matrix& x, std::span<const double> y) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (y.size() != n) throw DimensionMismatch("standardize: y length differs from rows of X");
  if (n < 2) throw DimensionMismatch("standardize: need at least two observations");
  StandardizedData s;
  s.col_means.assign(p, 0.0);
  s.col_scales.assign(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = x.row(i);
    for (std::size_t j = 0; j < p; ++j) s.col_means[j] += r[j];
  }
  for (double& m : s.col_means) m /= static_cast<double>(n);
  s.xs = Matrix(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      const double d = x(i, j) - s.col_means[j];
      s.xs(i, j) = d;
      s.col_scales[j] += d * d;
    }
  for (std::size_t j = 0; j < p; ++j) {
    const double sd = std::sqrt(s.col_scales[j] / static_cast<double>(n));
    if (!(sd > 1e-12)) throw ConstantColumn("standardize: column " + std::to_string(j) + " is constant");
    s.col_scales[j] = sd;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) s.xs(i, j) /= s.col_scales[j];

  s.y_mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  s.ys.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.ys[i] = y[i] - s.y_mean;

  s.cov = Matrix(p, p);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = s.xs.row(i);
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a; b < p; ++b) s.cov(a, b) += r[a] * r[b];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a; b < p; ++b) {
      s.cov(a, b) *= inv_n;
      s.cov(b, a) = s.cov(a, b);
    }
  s.corr = transpose_times(s.xs, s.ys);
  for (double& c : s.corr) c *= inv_n;
  return s;
}

inline StandardizedData standardize(const RegressionData& data) {
  return standardize(data.x(), data.y());
}

inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

/// Minimizer of (b - z)^2 / 2 + SCAD(|b|; lambda, a).
inline double scad_threshold(double z, double lambda, double a) {
  const double az = std::abs(z);
  if (az <= 2.0 * lambda) return soft_threshold(z, lambda);
  if (az <= a * lambda) return ((a - 1.0) * z - std::copysign(a * lambda, z)) / (a - 2.0);
  return z;
}

/// SCAD penalty value at |b| = t.
inline double scad_penalty(double t, double lambda, double a) {
  t = std::abs(t);
  if (t <= lambda) return lambda * t;
  if (t <= a * lambda) return (2.0 * a * lambda * t - t * t - lambda * lambda) / (2.0 * (a - 1.0));
  return 0.5 * lambda * lambda * (a + 1.0);
}

namespace detail {

inline double weight_of(const PenaltySpec& spec, std::size_t j) {
  if (spec.kind == PenaltyKind::ALASSO && spec.weights) return (*spec.weights)[j];
  return 1.0;
}

inline void require_weights(const PenaltySpec& spec, std::size_t p) {
  if (spec.kind != PenaltyKind::ALASSO) return;
  if (!spec.weights)
    throw ConfigError("adaptive LASSO needs weights; call alasso_weights or fit_penalized");
  if (spec.weights->size() != p) throw DimensionMismatch("PenaltySpec: weights length differs from p");
}

}  // namespace detail

inline double penalty_value(const PenaltySpec& spec, double lambda, std::span<const double> beta) {
  double pen = 0.0;
  for (std::size_t j = 0; j < beta.size(); ++j) {
    const double b = beta[j];
    switch (spec.kind) {
      case PenaltyKind::LASSO: pen += lambda * std::abs(b); break;
      case PenaltyKind::ALASSO: pen += lambda * detail::weight_of(spec, j) * std::abs(b); break;
      case PenaltyKind::EN: pen += lambda * (spec.mix * std::abs(b) + (1.0 - spec.mix) * b * b); break;
      case PenaltyKind::SCAD: pen += scad_penalty(b, lambda, spec.scad_a); break;
    }
  }
  return pen;
}

/// (1 / 2n) ||ys - Xs b||^2 + penalty, evaluated from the stored moments.
inline double penalized_objective(const StandardizedData& s, const PenaltySpec& spec, double lambda,
                                  std::span<const double> beta) {
  const double yy = squared_norm(s.ys) / static_cast<double>(s.n());
  const Vector cb = s.cov * beta;
  const double loss = 0.5 * (yy - 2.0 * dot(s.corr, beta) + dot(beta, cb));
  return loss + penalty_value(spec, lambda, beta);
}

/// Largest KKT violation of a convex-penalty solution. Zero coordinates need
/// |g_j| <= lambda * mix * w_j; active ones need g_j = lambda * mix * w_j * sign(b_j),
/// where g_j is the negative gradient of the smooth part.
inline double kkt_violation(const StandardizedData& s, const PenaltySpec& spec, double lambda,
                            std::span<const double> beta) {
  const Vector cb = s.cov * beta;
  double worst = 0.0;
  for (std::size_t j = 0; j < beta.size(); ++j) {
    double g = s.corr[j] - cb[j];
    if (spec.kind == PenaltyKind::EN) g -= 2.0 * lambda * (1.0 - spec.mix) * beta[j];
    const double bound = lambda * spec.mix * detail::weight_of(spec, j);
    const double v = beta[j] == 0.0 ? std::max(0.0, std::abs(g) - bound)
                                     : std::abs(g - std::copysign(bound, beta[j]));
    worst = std::max(worst, v);
  }
  return worst;
}

struct CdOptions {
  double tol = 1e-8;        ///< stop when no coefficient moves more than this in a sweep
  int max_sweeps = 100000;
  /// Called after every full sweep with the current coefficients.
  std::function<void(int sweep, const Vector& beta)> on_sweep;
};

namespace detail {

// For a convex penalty with a fixed active set A and sign pattern s, the
// objective on that orthant face is a convex quadratic whose minimizer solves
//   (cov_AA + ridge I) b_A = corr_A - l1 * w_A * s_A.
// The step moves towards that minimizer, stopping where the first coordinate
// reaches zero, so the objective cannot increase; the change is computed and
// the step rejected if rounding says otherwise. Returns false when no step was taken.
inline bool active_set_step(const StandardizedData& s, const PenaltySpec& spec, double l1, double ridge,
                            Vector& beta, Vector& grad) {
  std::vector<std::size_t> act;
  for (std::size_t j = 0; j < beta.size(); ++j)
    if (beta[j] != 0.0) act.push_back(j);
  if (act.empty()) return false;
  const std::size_t m = act.size();
  Matrix a(m, m);
  Vector rhs(m);
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) a(u, v) = s.cov(act[u], act[v]);
    a(u, u) += ridge;
    rhs[u] = s.corr[act[u]] - std::copysign(l1 * weight_of(spec, act[u]), beta[act[u]]);
  }
  Vector sol;
  try {
    sol = spd_solve(a, rhs);
  } catch (const NotPositiveDefinite&) {
    // more active columns than the fold's rank: solve a slightly damped system,
    // the descent check below decides whether the result is usable
    double tr = 0.0;
    for (std::size_t u = 0; u < m; ++u) tr += a(u, u);
    for (std::size_t u = 0; u < m; ++u) a(u, u) += 1e-10 * tr / static_cast<double>(m);
    try {
      sol = spd_solve(a, rhs);
    } catch (const NotPositiveDefinite&) {
      return false;
    }
  }
  double t = 1.0;
  std::size_t hit = m;
  for (std::size_t u = 0; u < m; ++u) {
    const double b = beta[act[u]];
    if (!std::isfinite(sol[u])) return false;
    if (sol[u] == 0.0 || std::signbit(sol[u]) != std::signbit(b)) {
      const double tu = b / (b - sol[u]);
      if (tu < t) {
        t = tu;
        hit = u;
      }
    }
  }
  Vector d(m);
  for (std::size_t u = 0; u < m; ++u) d[u] = u == hit ? -beta[act[u]] : t * (sol[u] - beta[act[u]]);
  // objective change: smooth part, ridge part and the (linear on this face) L1 part
  double change = 0.0;
  for (std::size_t u = 0; u < m; ++u) {
    const std::size_t j = act[u];
    double cd = 0.0;
    for (std::size_t v = 0; v < m; ++v) cd += s.cov(j, act[v]) * d[v];
    const double next = beta[j] + d[u];
    change += -grad[j] * d[u] + 0.5 * d[u] * cd + 0.5 * ridge * (next * next - beta[j] * beta[j]) +
              l1 * weight_of(spec, j) * (std::abs(next) - std::abs(beta[j]));
  }
  if (!(change < 0.0)) return false;
  for (std::size_t u = 0; u < m; ++u) {
    const std::size_t j = act[u];
    if (d[u] == 0.0) continue;
    beta[j] = u == hit ? 0.0 : beta[j] + d[u];
    for (std::size_t k = 0; k < beta.size(); ++k) grad[k] -= s.cov(k, j) * d[u];
  }
  return true;
}

}  // namespace detail

/// Cyclic coordinate descent from `beta` (warm start) in place. Returns the
/// number of sweeps used. For the convex penalties, whenever a sweep leaves
/// the active set and signs unchanged the exact minimizer on that face is
/// tried; convergence is still judged by a full sweep.
inline int cd_fit_inplace(const StandardizedData& s, const PenaltySpec& spec, double lambda,
                          Vector& beta, const CdOptions& opt = {}) {
  const std::size_t p = s.p();
  if (beta.size() != p) throw DimensionMismatch("cd_fit: warm start has wrong length");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("cd_fit: lambda must be finite and >= 0");
  detail::require_weights(spec, p);

  // grad[j] = corr_j - (cov * beta)_j, kept current as coordinates move
  Vector grad = s.corr;
  for (std::size_t k = 0; k < p; ++k)
    if (beta[k] != 0.0)
      for (std::size_t j = 0; j < p; ++j) grad[j] -= s.cov(j, k) * beta[k];

  const double l1 = lambda * spec.mix;
  const double ridge = 2.0 * lambda * (1.0 - spec.mix);
  double max_change = std::numeric_limits<double>::infinity();
  std::vector<int> sign(p, 2);  // 2: no previous sweep yet
  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    max_change = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double cjj = s.cov(j, j);
      const double old = beta[j];
      const double z = grad[j] + cjj * old;
      double next = 0.0;
      switch (spec.kind) {
        case PenaltyKind::LASSO:
        case PenaltyKind::ALASSO:
          next = soft_threshold(z, l1 * detail::weight_of(spec, j)) / cjj;
          break;
        case PenaltyKind::EN:
          next = soft_threshold(z, l1) / (cjj + ridge);
          break;
        case PenaltyKind::SCAD:
          next = scad_threshold(z / cjj, lambda / cjj, spec.scad_a);
          break;
      }
      const double delta = next - old;
      if (delta != 0.0) {
        beta[j] = next;
        for (std::size_t k = 0; k < p; ++k) grad[k] -= s.cov(k, j) * delta;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (opt.on_sweep) opt.on_sweep(sweep, beta);
    if (max_change <= opt.tol) return sweep;
    if (spec.convex()) {
      bool same = true;
      for (std::size_t j = 0; j < p && same; ++j)
        same = sign[j] == (beta[j] > 0.0) - (beta[j] < 0.0);
      if (same) detail::active_set_step(s, spec, l1, ridge, beta, grad);
      for (std::size_t j = 0; j < p; ++j) sign[j] = (beta[j] > 0.0) - (beta[j] < 0.0);
    }
  }
  throw MaxSweepsExceeded("cd_fit: " + std::to_string(opt.max_sweeps) +
                          " sweeps without convergence (last max change " +
                          std::to_string(max_change) + ")");
}

inline Vector cd_fit(const StandardizedData& s, const PenaltySpec& spec, double lambda,
                     const CdOptions& opt = {}) {
  Vector beta(s.p(), 0.0);
  cd_fit_inplace(s, spec, lambda, beta, opt);
  return beta;
}

/// Adaptive-LASSO weights |pilot_j|^{-gamma}, capped at 1e8 when |pilot_j| < 1e-8.
inline Vector alasso_weights(std::span<const double> pilot, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("alasso_weights: gamma must be > 0");
  Vector w(pilot.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double a = std::abs(pilot[j]);
    w[j] = a < 1e-8 ? 1e8 : std::min(std::pow(a, -gamma), 1e8);
  }
  return w;
}

/// Fills in adaptive-LASSO weights from the least-squares pilot on the
/// standardized scale when the spec carries none.
inline PenaltySpec with_resolved_weights(const StandardizedData& s, PenaltySpec spec) {
  if (spec.kind == PenaltyKind::ALASSO && !spec.weights) {
    const Vector pilot = spd_solve(s.cov, s.corr);
    spec.weights = alasso_weights(pilot, spec.gamma);
  }
  return spec;
}

/// Smallest lambda at which the all-zero vector solves the problem.
inline double lambda_max(const StandardizedData& s, const PenaltySpec& spec) {
  detail::require_weights(spec, s.p());
  double m = 0.0;
  for (std::size_t j = 0; j < s.p(); ++j)
    m = std::max(m, std::abs(s.corr[j]) / (spec.mix * detail::weight_of(spec, j)));
  return m;
}

/// n_lambda log-spaced values from lambda_max down to 1e-3 * lambda_max.
inline Vector lambda_path(const StandardizedData& s, const PenaltySpec& spec, int n_lambda) {
  if (n_lambda < 2) throw DomainError("lambda_path: n_lambda must be >= 2");
  spec.validate();
  double top = lambda_max(s, spec);
  if (!(top > 0.0)) top = std::numeric_limits<double>::min() * 1e3;  // y is constant: every fit is zero
  Vector grid(static_cast<std::size_t>(n_lambda));
  const double step = std::log(1e-3) / (n_lambda - 1);
  for (int k = 0; k < n_lambda; ++k) grid[static_cast<std::size_t>(k)] = top * std::exp(step * k);
  grid.back() = 1e-3 * top;
  return grid;
}

struct PathResult {
  Vector lambdas;                     ///< strictly decreasing
  std::vector<Vector> betas_by_lambda;  ///< full-data fits, original scale
  std::optional<Vector> cv_errors;    ///< mean out-of-fold squared prediction error
  std::optional<std::size_t> chosen_index;
};

/// Fits the whole path with warm starts; results stay on the standardized scale.
inline std::vector<Vector> fit_path(const StandardizedData& s, const PenaltySpec& spec,
                                    std::span<const double> lambdas, const CdOptions& opt = {}) {
  std::vector<Vector> out;
  out.reserve(lambdas.size());
  Vector beta(s.p(), 0.0);
  for (double lam : lambdas) {
    cd_fit_inplace(s, spec, lam, beta, opt);
    out.push_back(beta);
  }
  return out;
}

/// Fold label per observation: a seeded Fisher-Yates permutation dealt round-robin.
inline std::vector<int> fold_assignment(std::size_t n, int folds, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
  std::vector<int> label(n);
  for (std::size_t pos = 0; pos < n; ++pos) label[perm[pos]] = static_cast<int>(pos % static_cast<std::size_t>(folds));
  return label;
}

/// K-fold CV over the full-data lambda path. Picks the minimum mean
/// out-of-fold squared error, ties going to the larger lambda.
inline PathResult cross_validate(const Matrix& x, std::span<const double> y, const PenaltySpec& spec_in,
                                 int folds, int n_lambda, std::uint64_t seed,
                                 const CdOptions& opt = {}) {
  spec_in.validate();
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (folds < 2) throw ConfigError("cross_validate: folds must be >= 2");
  if (static_cast<std::size_t>(folds) > n) throw ConfigError("cross_validate: more folds than observations");
  if (n / static_cast<std::size_t>(folds) < 2)
    throw FoldTooSmall("cross_validate: some fold would hold fewer than 2 observations");

  const StandardizedData full = standardize(x, y);
  const PenaltySpec spec = with_resolved_weights(full, spec_in);
  PathResult res;
  res.lambdas = lambda_path(full, spec, n_lambda);

  const std::vector<int> label = fold_assignment(n, folds, seed);
  Vector sse(res.lambdas.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < n; ++i) (label[i] == f ? test : train).push_back(i);
    Matrix xt(train.size(), p);
    Vector yt(train.size());
    for (std::size_t r = 0; r < train.size(); ++r) {
      const auto src = x.row(train[r]);
      std::copy(src.begin(), src.end(), xt.row(r).begin());
      yt[r] = y[train[r]];
    }
    const StandardizedData st = standardize(xt, yt);
    Vector beta(p, 0.0);
    for (std::size_t k = 0; k < res.lambdas.size(); ++k) {
      cd_fit_inplace(st, spec, res.lambdas[k], beta, opt);
      const Vector b = st.to_original(beta);
      const double a = st.intercept(beta);
      for (std::size_t i : test) {
        const double e = y[i] - (a + dot(x.row(i), b));
        sse[k] += e * e;
      }
    }
  }
  for (double& v : sse) v /= static_cast<double>(n);

  std::size_t best = 0;
  for (std::size_t k = 1; k < sse.size(); ++k)
    if (sse[k] < sse[best]) best = k;

  for (const Vector& b : fit_path(full, spec, res.lambdas, opt)) res.betas_by_lambda.push_back(full.to_original(b));
  res.cv_errors = std::move(sse);
  res.chosen_index = best;
  return res;
}

inline PathResult cross_validate(const RegressionData& data, const PenaltySpec& spec, int folds,
                                 int n_lambda, std::uint64_t seed, const CdOptions& opt = {}) {
  return cross_validate(data.x(), data.y(), spec, folds, n_lambda, seed, opt);
}

struct PenalizedFitOptions {
  int folds = 10;
  int n_lambda = 50;
  CdOptions cd;
};

/// End to end: standardize, derive adaptive weights if needed, run the CV
/// path and return the chosen fit on the original scale.
inline CoefficientEstimate fit_penalized(const Matrix& x, std::span<const double> y, const PenaltySpec& spec,
                                         std::uint64_t seed, const PenalizedFitOptions& opt = {}) {
  PathResult path = cross_validate(x, y, spec, opt.folds, opt.n_lambda, seed, opt.cd);
  const std::size_t k = *path.chosen_index;
  CoefficientEstimate est{std::move(path.betas_by_lambda[k]), estimator_id(spec.kind), {}};
  est.tuning["lambda"] = path.lambdas[k];
  est.tuning["folds"] = opt.folds;
  switch (spec.kind) {
    case PenaltyKind::EN: est.tuning["mix"] = spec.mix; break;
    case PenaltyKind::SCAD: est.tuning["scad_a"] = spec.scad_a; break;
    case PenaltyKind::ALASSO: est.tuning["gamma"] = spec.gamma; break;
    case PenaltyKind::LASSO: break;
  }
  return est;
}

inline CoefficientEstimate fit_penalized(const RegressionData& data, const PenaltySpec& spec, int folds,
                                         std::uint64_t seed) {
  PenalizedFitOptions opt;
  opt.folds = folds;
  return fit_penalized(data.x(), data.y(), spec, seed, opt);
}

}  // namespace shrinkbench
