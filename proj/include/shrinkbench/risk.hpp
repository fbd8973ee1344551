#pragma once

// Asymptotic distributional bias (ADB) and quadratic risk (ADQR) of the
// classical estimators under local alternatives beta_n = delta / sqrt(n).
//
// In the limit the LSE behaves like Z ~ N(delta, sigma^2 C^{-1}) and the test
// statistic like Q = Z'CZ / sigma^2 ~ chi2_p(Delta^2), Delta^2 = delta'C delta / sigma^2.
// LSE, RE, PTE, S, S+ and IPT are all of the form Z * g(Q). With C = I and the
// identities
//
//   E[Z'Z g^2(Q)] = sigma^2 (p E[g^2(chi2_{p+2})] + Delta^2 E[g^2(chi2_{p+4})])
//   E[delta'Z g(Q)] = sigma^2 Delta^2 E[g(chi2_{p+2})]
//
// the risk of Z g(Q) is
//
//   sigma^2 [ tr C^{-1} E[g^2(chi2_{p+2})] + Delta^2 (E[g^2(chi2_{p+4})] - 2 E[g(chi2_{p+2})] + 1) ]
//
// and the bias is -(1 - E[g(chi2_{p+2})]) delta. Every chi-square here has
// noncentrality Delta^2. tr C^{-1} replaces p in the variance term, as in the
// classical statements of these results; the formulas are exact for C = I.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shrinkbench/distributions.hpp"
#include "shrinkbench/estimators.hpp"
#include "shrinkbench/linalg.hpp"

namespace shrinkbench {

struct RiskContext {
  int p = 10;
  double tr_c_inv = 10.0;
  double delta2 = 0.0;
  double sigma2 = 1.0;
  double alpha = 0.05;  ///< preliminary-test level

  void validate() const {
    if (p < 1) throw DomainError("RiskContext: p must be >= 1");
    if (!(tr_c_inv > 0.0) || !std::isfinite(tr_c_inv)) throw DomainError("RiskContext: tr C^-1 must be finite and > 0");
    if (!(delta2 >= 0.0) || !std::isfinite(delta2)) throw DomainError("RiskContext: Delta^2 must be finite and >= 0");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("RiskContext: sigma^2 must be finite and > 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("RiskContext: alpha must lie in (0, 1)");
  }

  /// Same context at another noncentrality.
  RiskContext at(double d2) const {
    RiskContext c = *this;
    c.delta2 = d2;
    return c;
  }
};

/// ADB = adb_factor * delta.
struct RiskReport {
  EstimatorId id = EstimatorId::LSE;
  double adb_factor = 0.0;
  double adqr = 0.0;
};

namespace detail {

// Moments of a shrink function g under chi2_{p+2}(Delta^2) and chi2_{p+4}(Delta^2).
struct ShrinkMoments {
  double g_p2 = 1.0;   // E[g(chi2_{p+2})]
  double g2_p2 = 1.0;  // E[g^2(chi2_{p+2})]
  double g2_p4 = 1.0;  // E[g^2(chi2_{p+4})]
};

inline RiskReport assemble(EstimatorId id, const RiskContext& ctx, const ShrinkMoments& m) {
  const double adqr = ctx.sigma2 * (ctx.tr_c_inv * m.g2_p2 + ctx.delta2 * (m.g2_p4 - 2.0 * m.g_p2 + 1.0));
  return {id, m.g_p2 - 1.0, std::max(adqr, 0.0)};
}

// E[X^{-r} 1{X >= c}] for X ~ chi2_d(Delta^2).
inline double upper_moment(int d, double delta2, int r, double c, const SeriesControl& ctl) {
  const double full = r == 0 ? 1.0 : inv_moment(d, delta2, r, ctl);
  return std::max(full - trunc_inv_moment(d, delta2, r, c, ctl), 0.0);
}

// g(x) = (1 - s/x) 1{x >= c}: E[g] and E[g^2] under chi2_d(Delta^2).
inline std::pair<double, double> truncated_stein_moments(int d, double delta2, double s, double c,
                                                         const SeriesControl& ctl) {
  const double u0 = upper_moment(d, delta2, 0, c, ctl);
  const double u1 = upper_moment(d, delta2, 1, c, ctl);
  const double u2 = upper_moment(d, delta2, 2, c, ctl);
  return {u0 - s * u1, u0 - 2.0 * s * u1 + s * s * u2};
}

}  // namespace detail

inline RiskReport risk_lse(const RiskContext& ctx) {
  ctx.validate();
  return {EstimatorId::LSE, 0.0, ctx.sigma2 * ctx.tr_c_inv};
}

inline RiskReport risk_re(const RiskContext& ctx) {
  ctx.validate();
  return {EstimatorId::RE, -1.0, ctx.sigma2 * ctx.delta2};
}

inline RiskReport risk_pte(const RiskContext& ctx, const SeriesControl& ctl = {}) {
  ctx.validate();
  const double k = central_quantile(ctx.alpha, ctx.p);
  const double h2 = noncentral_cdf(k, ctx.p + 2, ctx.delta2, ctl);
  const double h4 = noncentral_cdf(k, ctx.p + 4, ctx.delta2, ctl);
  return detail::assemble(EstimatorId::PTE, ctx, {1.0 - h2, 1.0 - h2, 1.0 - h4});
}

inline RiskReport risk_stein(const RiskContext& ctx, const SeriesControl& ctl = {}) {
  ctx.validate();
  if (ctx.p < 3) throw RequiresP3("risk_stein: p >= 3 required");
  const double s = ctx.p - 2.0;
  const double m1_p2 = inv_moment(ctx.p + 2, ctx.delta2, 1, ctl);
  const double m2_p2 = inv_moment(ctx.p + 2, ctx.delta2, 2, ctl);
  const double m1_p4 = inv_moment(ctx.p + 4, ctx.delta2, 1, ctl);
  const double m2_p4 = inv_moment(ctx.p + 4, ctx.delta2, 2, ctl);
  return detail::assemble(EstimatorId::S, ctx,
                          {1.0 - s * m1_p2, 1.0 - 2.0 * s * m1_p2 + s * s * m2_p2,
                           1.0 - 2.0 * s * m1_p4 + s * s * m2_p4});
}

/// Positive-rule Stein: the Stein shrink function truncated to zero on
/// chi2 < p - 2.
inline RiskReport risk_prse(const RiskContext& ctx, const SeriesControl& ctl = {}) {
  ctx.validate();
  if (ctx.p < 3) throw RequiresP3("risk_prse: p >= 3 required");
  const double s = ctx.p - 2.0;
  const auto [g_p2, g2_p2] = detail::truncated_stein_moments(ctx.p + 2, ctx.delta2, s, s, ctl);
  const double g2_p4 = detail::truncated_stein_moments(ctx.p + 4, ctx.delta2, s, s, ctl).second;
  return detail::assemble(EstimatorId::SPLUS, ctx, {g_p2, g2_p2, g2_p4});
}

/// Improved preliminary test: Stein shrinkage applied only when the test
/// rejects, i.e. on chi2 >= chi2_p(alpha).
inline RiskReport risk_ipt(const RiskContext& ctx, const SeriesControl& ctl = {}) {
  ctx.validate();
  if (ctx.p < 3) throw RequiresP3("risk_ipt: p >= 3 required");
  const double s = ctx.p - 2.0;
  const double k = central_quantile(ctx.alpha, ctx.p);
  const auto [g_p2, g2_p2] = detail::truncated_stein_moments(ctx.p + 2, ctx.delta2, s, k, ctl);
  const double g2_p4 = detail::truncated_stein_moments(ctx.p + 4, ctx.delta2, s, k, ctl).second;
  return detail::assemble(EstimatorId::IPT, ctx, {g_p2, g2_p2, g2_p4});
}

/// Ridge risk under the orthonormal normalization C = I, where tr C^{-1} = p
/// and delta'delta = sigma^2 Delta^2. kappa = +inf is the zero estimator.
inline RiskReport risk_ridge(const RiskContext& ctx, double kappa) {
  ctx.validate();
  if (!(kappa >= 0.0)) throw DomainError("risk_ridge: kappa must be >= 0");
  if (std::isinf(kappa)) return {EstimatorId::RR, -1.0, ctx.sigma2 * ctx.delta2};
  const double d = (1.0 + kappa) * (1.0 + kappa);
  return {EstimatorId::RR, -kappa / (1.0 + kappa),
          (ctx.sigma2 * ctx.p + kappa * kappa * ctx.sigma2 * ctx.delta2) / d};
}

/// Ridge risk for a general C:
///   sigma^2 tr[(C + kI)^{-1} C (C + kI)^{-1}] + k^2 delta'(C + kI)^{-2} delta.
inline double ridge_risk_general(const Matrix& c, std::span<const double> delta, double sigma2, double kappa) {
  const std::size_t p = c.rows();
  if (c.cols() != p || delta.size() != p) throw DimensionMismatch("ridge_risk_general: dimensions differ");
  if (!(kappa >= 0.0)) throw DomainError("ridge_risk_general: kappa must be >= 0");
  Matrix a = c;
  for (std::size_t j = 0; j < p; ++j) a(j, j) += kappa;
  const Cholesky chol(a);
  const Matrix a_inv = chol.inverse();
  const Matrix m = a_inv * c * a_inv;
  double tr = 0.0;
  for (std::size_t j = 0; j < p; ++j) tr += m(j, j);
  const Vector v = chol.solve(delta);
  return sigma2 * tr + kappa * kappa * squared_norm(v);
}

/// Minimizer of risk_ridge over kappa: p / Delta^2. At Delta^2 = 0 the risk
/// decreases all the way to full shrinkage, reported as +infinity.
inline double optimal_kappa(int p, double delta2) {
  if (p < 1) throw DomainError("optimal_kappa: p must be >= 1");
  if (!(delta2 >= 0.0) || std::isnan(delta2)) throw DomainError("optimal_kappa: Delta^2 must be >= 0");
  if (delta2 == 0.0) return std::numeric_limits<double>::infinity();
  return p / delta2;
}

/// Risk of an estimator by id; alpha comes from the context and ridge uses kappa.
inline RiskReport risk_of(EstimatorId id, const RiskContext& ctx, double kappa = 0.0,
                          const SeriesControl& ctl = {}) {
  switch (id) {
    case EstimatorId::LSE: return risk_lse(ctx);
    case EstimatorId::RE: return risk_re(ctx);
    case EstimatorId::PTE: return risk_pte(ctx, ctl);
    case EstimatorId::IPT: return risk_ipt(ctx, ctl);
    case EstimatorId::S: return risk_stein(ctx, ctl);
    case EstimatorId::SPLUS: return risk_prse(ctx, ctl);
    case EstimatorId::RR: return risk_ridge(ctx, kappa);
    default: throw DomainError("risk_of: no analytic risk for " + std::string(to_string(id)));
  }
}

/// tr C^{-1} / Ch_max(C^{-1}) >= (p + 2) / 2, the condition under which the
/// Stein estimator dominates the LSE for general C. Takes the eigenvalues of C^{-1}.
inline bool stein_dominance_condition(std::span<const double> c_inv_eigenvalues) {
  if (c_inv_eigenvalues.empty()) throw DomainError("stein_dominance_condition: empty spectrum");
  double tr = 0.0;
  double mx = 0.0;
  for (double e : c_inv_eigenvalues) {
    if (!(e > 0.0)) throw DomainError("stein_dominance_condition: eigenvalues must be > 0");
    tr += e;
    mx = std::max(mx, e);
  }
  const double p = static_cast<double>(c_inv_eigenvalues.size());
  return tr / mx >= 0.5 * (p + 2.0);
}

/// Same condition from C itself; Ch_max(C^{-1}) = 1 / Ch_min(C).
inline bool stein_dominance_condition(const Matrix& c) {
  const Vector eig = symmetric_eigenvalues(c);
  Vector inv(eig.size());
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (!(eig[i] > 0.0)) throw NotPositiveDefinite("stein_dominance_condition: C is not positive definite");
    inv[i] = 1.0 / eig[i];
  }
  return stein_dominance_condition(inv);
}

/// Risk difference ADQR(LSE) - ADQR(PTE); positive where the PTE is better.
inline double pte_lse_risk_gap(const RiskContext& ctx, const SeriesControl& ctl = {}) {
  return risk_lse(ctx).adqr - risk_pte(ctx, ctl).adqr;
}

/// Delta^2 at which the PTE stops beating the LSE, located by bisection on
/// [0, upper]. nullopt when the gap does not change sign on that interval.
inline std::optional<double> pte_lse_crossover(const RiskContext& ctx, double upper = 200.0,
                                               const SeriesControl& ctl = {}) {
  double lo = 0.0;
  double hi = 0.0;
  double prev = pte_lse_risk_gap(ctx.at(0.0), ctl);
  if (prev <= 0.0) return std::nullopt;
  bool found = false;
  for (double d2 = 0.5; d2 <= upper; d2 += 0.5) {
    const double g = pte_lse_risk_gap(ctx.at(d2), ctl);
    if (g <= 0.0) {
      lo = d2 - 0.5;
      hi = d2;
      found = true;
      break;
    }
    prev = g;
  }
  if (!found) return std::nullopt;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pte_lse_risk_gap(ctx.at(mid), ctl) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct PairComparison {
  EstimatorId first;
  EstimatorId second;
  std::vector<double> first_better;   ///< Delta^2 values with ADQR(first) < ADQR(second)
  std::vector<double> second_better;  ///< Delta^2 values with ADQR(second) < ADQR(first)
  std::vector<double> tied;
};

struct DominanceReport {
  std::vector<double> delta2;
  std::vector<std::vector<RiskReport>> risks;  ///< per Delta^2, in `estimators` order
  std::vector<EstimatorId> estimators;
  std::vector<PairComparison> pairs;
  double re_lse_boundary = 0.0;  ///< RE beats LSE exactly for Delta^2 < tr C^{-1}
  std::optional<double> pte_lse_boundary;
  std::optional<bool> stein_condition;
};

/// Evaluates every classical estimator over a Delta^2 grid (the other context
/// fields are taken from `base`) and summarizes the pairwise dominance regions.
/// Ridge is evaluated at its optimal kappa for each Delta^2.
inline DominanceReport dominance_report(const RiskContext& base, std::span<const double> delta2_grid,
                                        std::optional<Matrix> c = std::nullopt,
                                        const SeriesControl& ctl = {}) {
  base.validate();
  DominanceReport rep;
  rep.estimators = {EstimatorId::LSE, EstimatorId::RE, EstimatorId::PTE, EstimatorId::IPT,
                    EstimatorId::S,   EstimatorId::SPLUS, EstimatorId::RR};
  if (base.p < 3)
    rep.estimators = {EstimatorId::LSE, EstimatorId::RE, EstimatorId::PTE, EstimatorId::RR};
  rep.re_lse_boundary = base.tr_c_inv;
  rep.pte_lse_boundary = pte_lse_crossover(base, 200.0, ctl);
  if (c) rep.stein_condition = stein_dominance_condition(*c);

  for (double d2 : delta2_grid) {
    const RiskContext ctx = base.at(d2);
    std::vector<RiskReport> row;
    for (EstimatorId id : rep.estimators)
      row.push_back(risk_of(id, ctx, id == EstimatorId::RR ? optimal_kappa(ctx.p, d2) : 0.0, ctl));
    rep.delta2.push_back(d2);
    rep.risks.push_back(std::move(row));
  }

  auto index_of = [&](EstimatorId id) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < rep.estimators.size(); ++i)
      if (rep.estimators[i] == id) return i;
    return std::nullopt;
  };
  const std::pair<EstimatorId, EstimatorId> wanted[] = {
      {EstimatorId::RE, EstimatorId::LSE},   {EstimatorId::PTE, EstimatorId::LSE},
      {EstimatorId::S, EstimatorId::LSE},    {EstimatorId::SPLUS, EstimatorId::S},
      {EstimatorId::IPT, EstimatorId::PTE},  {EstimatorId::RR, EstimatorId::LSE},
      {EstimatorId::PTE, EstimatorId::S}};
  for (const auto& [a, b] : wanted) {
    const auto ia = index_of(a);
    const auto ib = index_of(b);
    if (!ia || !ib) continue;
    PairComparison pc{a, b, {}, {}, {}};
    for (std::size_t k = 0; k < rep.delta2.size(); ++k) {
      const double ra = rep.risks[k][*ia].adqr;
      const double rb = rep.risks[k][*ib].adqr;
      const double tol = 1e-12 * std::max({1.0, ra, rb});
      if (ra < rb - tol)
        pc.first_better.push_back(rep.delta2[k]);
      else if (rb < ra - tol)
        pc.second_better.push_back(rep.delta2[k]);
      else
        pc.tied.push_back(rep.delta2[k]);
    }
    rep.pairs.push_back(std::move(pc));
  }
  return rep;
}

}  // namespace shrinkbench
