#pragma once

// Closed-form estimators for the linear model y = X beta + e: least squares,
// restricted, preliminary-test, Stein-type and ridge.

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "shrinkbench/distributions.hpp"
#include "shrinkbench/error.hpp"
#include "shrinkbench/linalg.hpp"

namespace shrinkbench {

enum class EstimatorId { LSE, RE, PTE, IPT, S, SPLUS, RR, LASSO, ALASSO, SCAD, EN };

inline constexpr std::string_view to_string(EstimatorId id) {
  switch (id) {
    case EstimatorId::LSE: return "LSE";
    case EstimatorId::RE: return "RE";
    case EstimatorId::PTE: return "PTE";
    case EstimatorId::IPT: return "IPT";
    case EstimatorId::S: return "S";
    case EstimatorId::SPLUS: return "S+";
    case EstimatorId::RR: return "RR";
    case EstimatorId::LASSO: return "LASSO";
    case EstimatorId::ALASSO: return "aLASSO";
    case EstimatorId::SCAD: return "SCAD";
    case EstimatorId::EN: return "EN";
  }
  return "?";
}

inline EstimatorId estimator_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(EstimatorId::EN); ++i) {
    const auto id = static_cast<EstimatorId>(i);
    if (to_string(id) == s) return id;
  }
  throw ConfigError("unknown estimator '" + std::string(s) + "'");
}

/// Design matrix and response. X'X and X'y are formed once at construction.
class RegressionData {
public:
  RegressionData(Matrix x, Vector y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.rows() != y_.size())
      throw DimensionMismatch("RegressionData: X has " + std::to_string(x_.rows()) +
                              " rows but y has length " + std::to_string(y_.size()));
    if (x_.cols() < 1) throw DimensionMismatch("RegressionData: p must be >= 1");
    if (x_.rows() <= x_.cols())
      throw DimensionMismatch("RegressionData: need n > p (n=" + std::to_string(x_.rows()) +
                              ", p=" + std::to_string(x_.cols()) + ")");
    for (double v : y_)
      if (!std::isfinite(v)) throw NonFiniteValue("RegressionData: non-finite response");
    gram_ = gram(x_);
    xty_ = transpose_times(x_, y_);
  }

  std::size_t n() const noexcept { return x_.rows(); }
  std::size_t p() const noexcept { return x_.cols(); }
  const Matrix& x() const noexcept { return x_; }
  const Vector& y() const noexcept { return y_; }
  const Matrix& gram_matrix() const noexcept { return gram_; }
  const Vector& xty() const noexcept { return xty_; }

private:
  Matrix x_;
  Vector y_;
  Matrix gram_;
  Vector xty_;
};

/// Fitted coefficients plus the estimator that produced them and its tuning values
/// (alpha, kappa, lambda, mix, scad_a, gamma as applicable).
struct CoefficientEstimate {
  Vector beta;
  EstimatorId id = EstimatorId::LSE;
  std::map<std::string, double> tuning;
};

struct TestResult {
  double statistic = 0.0;  ///< L_n = b'Cb / s^2
  double s2 = 0.0;
  int df = 0;        ///< p
  int error_df = 0;  ///< n - p
};

inline CoefficientEstimate lse(const RegressionData& data) {
  return {spd_solve(data.gram_matrix(), data.xty()), EstimatorId::LSE, {}};
}

/// Least squares subject to H beta = h.
inline CoefficientEstimate restricted_general(const RegressionData& data, const Matrix& h_mat,
                                              std::span<const double> h) {
  const std::size_t p = data.p();
  const std::size_t q = h_mat.rows();
  if (h_mat.cols() != p || h.size() != q)
    throw DimensionMismatch("restricted_general: H must be q x p and h length q");
  if (q > p) throw DimensionMismatch("restricted_general: more restrictions than coefficients");
  const Cholesky chol(data.gram_matrix());
  Vector beta = chol.solve(data.xty());

  // C^{-1} H', one column per restriction
  Matrix cinv_ht(p, q);
  for (std::size_t i = 0; i < q; ++i) {
    const Vector col = chol.solve(h_mat.row(i));
    for (std::size_t j = 0; j < p; ++j) cinv_ht(j, i) = col[j];
  }
  const Matrix inner = h_mat * cinv_ht;
  Vector gap = h_mat * beta;
  for (std::size_t i = 0; i < q; ++i) gap[i] -= h[i];
  const Vector mult = spd_solve(inner, gap);
  const Vector shift = cinv_ht * mult;
  for (std::size_t j = 0; j < p; ++j) beta[j] -= shift[j];
  return {std::move(beta), EstimatorId::RE, {}};
}

/// Restricted estimator under the full null beta = 0.
inline CoefficientEstimate restricted_null(std::size_t p) {
  if (p < 1) throw DomainError("restricted_null: p must be >= 1");
  return {Vector(p, 0.0), EstimatorId::RE, {}};
}

namespace detail {

inline TestResult test_statistic_for(const RegressionData& data, std::span<const double> b) {
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  const Vector fitted = data.x() * b;
  const double rss = squared_distance(data.y(), fitted);
  const double s2 = rss / static_cast<double>(n - p);
  if (s2 <= 1e-14) throw DegenerateResidual("test_statistic: s^2 <= 1e-14 (perfect fit)");
  const double quad = dot(b, data.gram_matrix() * b);
  return {std::max(quad, 0.0) / s2, s2, static_cast<int>(p), static_cast<int>(n - p)};
}

inline void require_p3(std::size_t p, const char* who) {
  if (p < 3) throw RequiresP3(std::string(who) + ": Stein-type shrinkage needs p >= 3");
}

inline void require_level(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError(std::string(who) + ": alpha must lie in (0, 1)");
}

}  // namespace detail

inline TestResult test_statistic(const RegressionData& data) {
  const Vector b = lse(data).beta;
  return detail::test_statistic_for(data, b);
}

/// Stein shrink factor 1 - (p-2)/L_n. Not clamped: it goes negative for L_n < p-2.
inline double stein_factor(const TestResult& t) {
  if (t.statistic == 0.0) throw DegenerateStatistic("stein: L_n = 0");
  return 1.0 - (t.df - 2.0) / t.statistic;
}

// Every estimator below is a scalar multiple of the LSE. These overloads take a
// precomputed LSE and test so that a simulation replication pays for them once.

inline CoefficientEstimate pte(const Vector& lse_beta, const TestResult& t, double alpha,
                               double critical_value) {
  const bool keep = !(t.statistic < critical_value);
  return {keep ? lse_beta : Vector(lse_beta.size(), 0.0), EstimatorId::PTE, {{"alpha", alpha}}};
}

inline CoefficientEstimate stein(const Vector& lse_beta, const TestResult& t) {
  detail::require_p3(lse_beta.size(), "stein");
  return {scaled(lse_beta, stein_factor(t)), EstimatorId::S, {}};
}

inline CoefficientEstimate prse(const Vector& lse_beta, const TestResult& t) {
  detail::require_p3(lse_beta.size(), "prse");
  if (!(t.statistic > t.df - 2.0)) return {Vector(lse_beta.size(), 0.0), EstimatorId::SPLUS, {}};
  return {scaled(lse_beta, stein_factor(t)), EstimatorId::SPLUS, {}};
}

inline CoefficientEstimate ipt(const Vector& lse_beta, const TestResult& t, double alpha,
                               double critical_value) {
  detail::require_p3(lse_beta.size(), "ipt");
  if (t.statistic < critical_value)
    return {Vector(lse_beta.size(), 0.0), EstimatorId::IPT, {{"alpha", alpha}}};
  return {scaled(lse_beta, stein_factor(t)), EstimatorId::IPT, {{"alpha", alpha}}};
}

/// Preliminary test estimator: zero when L_n falls below the upper-alpha
/// chi-square(p) critical value, the LSE otherwise.
inline CoefficientEstimate pte(const RegressionData& data, double alpha) {
  detail::require_level(alpha, "pte");
  const Vector b = lse(data).beta;
  const TestResult t = detail::test_statistic_for(data, b);
  return pte(b, t, alpha, central_quantile(alpha, t.df));
}

/// James-Stein-type estimator (1 - (p-2)/L_n) * LSE.
inline CoefficientEstimate stein(const RegressionData& data) {
  detail::require_p3(data.p(), "stein");
  const Vector b = lse(data).beta;
  return stein(b, detail::test_statistic_for(data, b));
}

/// Positive-rule Stein: zero unless L_n > p - 2.
inline CoefficientEstimate prse(const RegressionData& data) {
  detail::require_p3(data.p(), "prse");
  const Vector b = lse(data).beta;
  return prse(b, detail::test_statistic_for(data, b));
}

/// Improved preliminary test estimator: the PTE times the Stein factor. A
/// rejected test gives zero before the factor is evaluated, so L_n = 0 is fine.
inline CoefficientEstimate ipt(const RegressionData& data, double alpha) {
  detail::require_p3(data.p(), "ipt");
  detail::require_level(alpha, "ipt");
  const Vector b = lse(data).beta;
  const TestResult t = detail::test_statistic_for(data, b);
  return ipt(b, t, alpha, central_quantile(alpha, t.df));
}

/// Ridge estimator (X'X + kappa I)^{-1} X'y.
inline CoefficientEstimate ridge(const RegressionData& data, double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("ridge: kappa must be finite and >= 0");
  Matrix a = data.gram_matrix();
  for (std::size_t j = 0; j < a.rows(); ++j) a(j, j) += kappa;
  return {spd_solve(a, data.xty()), EstimatorId::RR, {{"kappa", kappa}}};
}

}  // namespace shrinkbench
