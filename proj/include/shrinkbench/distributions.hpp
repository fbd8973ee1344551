#pragma once

// Central and noncentral chi-square machinery: CDFs, upper-tail quantiles and
// (truncated) inverse moments. Noncentral quantities are Poisson(delta2 / 2)
// mixtures of central ones with df + 2j degrees of freedom.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shrinkbench/error.hpp"

namespace shrinkbench {

/// Truncation control for Poisson-mixture sums.
struct SeriesControl {
  double tol = 1e-12;       ///< stop once the neglected Poisson mass is below this
  int max_terms = 10000;

  void validate() const {
    if (!(tol > 0.0 && tol <= 1e-6))
      throw DomainError("SeriesControl: tol must lie in (0, 1e-6]");
    if (max_terms < 100) throw DomainError("SeriesControl: max_terms must be >= 100");
  }
};

namespace detail {

inline constexpr double kGammaEps = 1e-16;
inline constexpr int kGammaMaxIter = 100000;

// Regularized lower incomplete gamma by its power series; for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kGammaMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by modified Lentz continued fraction; for x >= a + 1.
inline double gamma_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kGammaEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

inline double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return std::clamp(gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(1.0 - gamma_q_fraction(a, x), 0.0, 1.0);
}

inline double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_q_fraction(a, x), 0.0, 1.0);
}

inline void require_df(int df, const char* who) {
  if (df < 1) throw DomainError(std::string(who) + ": df must be >= 1");
}

inline void require_delta2(double delta2, const char* who) {
  if (!(delta2 >= 0.0) || !std::isfinite(delta2))
    throw DomainError(std::string(who) + ": noncentrality must be finite and >= 0");
}

// E[(chi2_d)^{-r}] for a central chi-square; requires d > 2r.
inline double central_inverse_moment(int d, int r) {
  switch (r) {
    case 0: return 1.0;
    case 1: return 1.0 / (d - 2.0);
    case 2: return 1.0 / ((d - 2.0) * (d - 4.0));
    default: throw DomainError("inverse moment order must be 0, 1 or 2");
  }
}

}  // namespace detail

/// P(chi2_df <= x).
inline double central_cdf(double x, int df) {
  detail::require_df(df, "central_cdf");
  if (std::isnan(x)) throw DomainError("central_cdf: x is NaN");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return detail::gamma_p(0.5 * df, 0.5 * x);
}

/// P(chi2_df > x), accurate in the far upper tail.
inline double central_sf(double x, int df) {
  detail::require_df(df, "central_sf");
  if (std::isnan(x)) throw DomainError("central_sf: x is NaN");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return detail::gamma_q(0.5 * df, 0.5 * x);
}

/// Upper-tail critical value: the x with P(chi2_df > x) = prob.
inline double central_quantile(double prob, int df) {
  detail::require_df(df, "central_quantile");
  if (!(prob > 0.0 && prob < 1.0))
    throw DomainError("central_quantile: prob must lie in (0, 1)");
  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(df));
  while (central_sf(hi, df) > prob) {
    lo = hi;
    hi *= 2.0;
  }
  // bisection to a tight bracket, then Newton steps on the upper tail
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (central_sf(mid, df) > prob)
      lo = mid;
    else
      hi = mid;
  }
  double x = 0.5 * (lo + hi);
  const double a = 0.5 * df;
  for (int it = 0; it < 3; ++it) {
    const double density =
        std::exp((a - 1.0) * std::log(0.5 * x) - 0.5 * x - std::lgamma(a)) * 0.5;
    if (!(density > 0.0)) break;
    const double next = x + (central_sf(x, df) - prob) / density;
    if (!(next > lo && next < hi)) break;
    x = next;
  }
  return x;
}

/// Sums weight_j * term(j) over Poisson(lambda) weights, starting at the mode
/// and extending whichever side carries more mass until the neglected mass is
/// below ctl.tol. `mass_out`, when given, receives the accumulated weight.
template <class Term>
double poisson_mixture(double lambda, const SeriesControl& ctl, Term&& term,
                       double* mass_out = nullptr) {
  ctl.validate();
  if (lambda == 0.0) {
    if (mass_out) *mass_out = 1.0;
    return term(0, 1.0);
  }
  const long mode = static_cast<long>(std::floor(lambda));
  const double log_lambda = std::log(lambda);
  const double w_mode =
      std::exp(-lambda + mode * log_lambda - std::lgamma(static_cast<double>(mode) + 1.0));
  double sum = term(mode, w_mode);
  double mass = w_mode;
  long lo = mode;
  long hi = mode;
  double w_lo = w_mode;
  double w_hi = w_mode;
  int terms = 1;
  while (1.0 - mass >= ctl.tol) {
    const double next_lo = lo > 0 ? w_lo * lo / lambda : 0.0;
    const double next_hi = w_hi * lambda / (hi + 1);
    if (next_lo == 0.0 && next_hi == 0.0) break;
    if (++terms > ctl.max_terms)
      throw SeriesNotConverged("poisson_mixture: " + std::to_string(ctl.max_terms) +
                               " terms reached with tail mass " + std::to_string(1.0 - mass));
    if (next_lo >= next_hi) {
      --lo;
      w_lo = next_lo;
      sum += term(lo, w_lo);
      mass += w_lo;
    } else {
      ++hi;
      w_hi = next_hi;
      sum += term(hi, w_hi);
      mass += w_hi;
    }
  }
  if (1.0 - mass >= ctl.tol)
    throw SeriesNotConverged("poisson_mixture: weights underflowed with tail mass " +
                             std::to_string(1.0 - mass));
  if (mass_out) *mass_out = mass;
  return sum;
}

/// P(chi2_df(delta2) <= x) for the noncentral chi-square.
inline double noncentral_cdf(double x, int df, double delta2, const SeriesControl& ctl = {}) {
  detail::require_df(df, "noncentral_cdf");
  detail::require_delta2(delta2, "noncentral_cdf");
  if (x <= 0.0) return 0.0;
  const double v = poisson_mixture(0.5 * delta2, ctl, [&](long j, double w) {
    return w * central_cdf(x, df + 2 * static_cast<int>(j));
  });
  return std::clamp(v, 0.0, 1.0);
}

namespace detail {

inline void require_moment_order(int r, int max_r, const char* who) {
  if (r < 0 || r > max_r) throw DomainError(std::string(who) + ": unsupported moment order");
}

// Mixture components with df + 2j <= 2r have infinite moments. They may only be
// skipped when their Poisson weight has underflowed to zero.
inline void require_moment_exists(int df, double delta2, int r, const char* who) {
  if (df > 2 * r) return;
  if (delta2 == 0.0 || std::exp(-0.5 * delta2) > 0.0)
    throw MomentUndefined(std::string(who) + ": E[chi2^-" + std::to_string(r) +
                          "] is infinite for df=" + std::to_string(df));
}

}  // namespace detail

/// E[(chi2_df(delta2))^{-r}] for r in {1, 2}.
inline double inv_moment(int df, double delta2, int r, const SeriesControl& ctl = {}) {
  detail::require_df(df, "inv_moment");
  detail::require_delta2(delta2, "inv_moment");
  detail::require_moment_order(r, 2, "inv_moment");
  if (r == 0) return 1.0;
  detail::require_moment_exists(df, delta2, r, "inv_moment");
  return poisson_mixture(0.5 * delta2, ctl, [&](long j, double w) {
    const int d = df + 2 * static_cast<int>(j);
    if (d <= 2 * r) return 0.0;
    return w * detail::central_inverse_moment(d, r);
  });
}

/// E[(chi2_df(delta2))^{-r} 1{chi2 < cutoff}] for r in {0, 1, 2}. Each central
/// component uses E[X^{-r} 1{X < c}] = E[X^{-r}] * P(chi2_{d-2r} < c).
inline double trunc_inv_moment(int df, double delta2, int r, double cutoff,
                               const SeriesControl& ctl = {}) {
  detail::require_df(df, "trunc_inv_moment");
  detail::require_delta2(delta2, "trunc_inv_moment");
  detail::require_moment_order(r, 2, "trunc_inv_moment");
  if (!(cutoff > 0.0)) throw DomainError("trunc_inv_moment: cutoff must be > 0");
  if (r == 0) return noncentral_cdf(cutoff, df, delta2, ctl);
  detail::require_moment_exists(df, delta2, r, "trunc_inv_moment");
  return poisson_mixture(0.5 * delta2, ctl, [&](long j, double w) {
    const int d = df + 2 * static_cast<int>(j);
    if (d <= 2 * r) return 0.0;
    return w * detail::central_inverse_moment(d, r) * central_cdf(cutoff, d - 2 * r);
  });
}

}  // namespace shrinkbench
