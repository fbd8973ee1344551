#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "penalty_oracles.hpp"
#include "shrinkbench/estimators.hpp"
#include "shrinkbench/penalty.hpp"

using namespace shrinkbench;

using oracle::correlated_design;
using oracle::gaussian_vector;
using oracle::kkt_oracle;
using oracle::objective_oracle;
using oracle::orthonormal_design;

TEST_CASE("penalty spec validation") {
  CHECK_THROWS_AS(PenaltySpec::elastic_net(0.0).validate(), DomainError);
  CHECK_THROWS_AS(PenaltySpec::elastic_net(1.5).validate(), DomainError);
  CHECK_THROWS_AS(PenaltySpec::scad(2.0).validate(), DomainError);
  CHECK_THROWS_AS(PenaltySpec::adaptive_lasso(0.0).validate(), DomainError);
  PenaltySpec w = PenaltySpec::adaptive_lasso();
  w.weights = Vector{1.0, 0.0};
  CHECK_THROWS_AS(w.validate(), DomainError);
  CHECK_NOTHROW(PenaltySpec::elastic_net(1.0).validate());
  CHECK(!PenaltySpec::scad().convex());
}

TEST_CASE("standardization invariants") {
  Matrix x = oracle::random_matrix(40, 4, 2);
  for (std::size_t i = 0; i < 40; ++i) {
    x(i, 1) = 3.0 + 10.0 * x(i, 1);
    x(i, 2) *= 0.01;
  }
  const Vector y = gaussian_vector(40, 3);
  const StandardizedData s = standardize(x, y);
  for (std::size_t j = 0; j < 4; ++j) {
    double m = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < 40; ++i) m += s.xs(i, j) / 40.0;
    for (std::size_t i = 0; i < 40; ++i) ss += (s.xs(i, j) - m) * (s.xs(i, j) - m) / 40.0;
    CHECK(std::abs(m) <= 1e-10);
    CHECK(std::abs(std::sqrt(ss) - 1.0) <= 1e-8);
    CHECK(s.col_scales[j] > 0.0);
  }
  double ym = 0.0;
  for (double v : s.ys) ym += v;
  CHECK(std::abs(ym) < 1e-12);

  const StandardizedData again = standardize(s.xs, s.ys);
  for (double c : again.col_scales) CHECK(c == doctest::Approx(1.0).epsilon(1e-12));

  Matrix c = x;
  for (std::size_t i = 0; i < 40; ++i) c(i, 3) = 2.0;
  CHECK_THROWS_AS(standardize(c, y), ConstantColumn);
}

TEST_CASE("least squares survives standardization round trip") {
  Matrix x = oracle::random_matrix(50, 5, 8);
  for (std::size_t i = 0; i < 50; ++i) {
    x(i, 0) = 5.0 + x(i, 0);
    x(i, 3) *= 10.0;
  }
  // intercept column makes the direct fit comparable to the centred one
  Matrix xi(50, 6);
  for (std::size_t i = 0; i < 50; ++i) {
    xi(i, 0) = 1.0;
    for (std::size_t j = 0; j < 5; ++j) xi(i, j + 1) = x(i, j);
  }
  Vector y = gaussian_vector(50, 9);
  for (std::size_t i = 0; i < 50; ++i) y[i] += 2.0 + x(i, 3);
  const Vector direct = lse(RegressionData(xi, y)).beta;
  const StandardizedData s = standardize(x, y);
  const Vector bs = spd_solve(s.cov, s.corr);
  const Vector back = s.to_original(bs);
  for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(back[j] - direct[j + 1]) < 1e-8);
  CHECK(std::abs(s.intercept(bs) - direct[0]) < 1e-8);

  // scaling a column by 10 divides its coefficient by 10
  Matrix x10 = x;
  for (std::size_t i = 0; i < 50; ++i) x10(i, 2) *= 10.0;
  const StandardizedData s10 = standardize(x10, y);
  const Vector back10 = s10.to_original(spd_solve(s10.cov, s10.corr));
  CHECK(back10[2] == doctest::Approx(back[2] / 10.0).epsilon(1e-9));
}

TEST_CASE("soft threshold") {
  CHECK(soft_threshold(2.0, 0.5) == 1.5);
  CHECK(soft_threshold(0.3, 0.5) == 0.0);
  CHECK(soft_threshold(-2.0, 0.5) == -1.5);
  for (double z = -3.0; z <= 3.0; z += 0.125)
    for (double t : {0.0, 0.4, 1.0}) {
      const double r = soft_threshold(z, t);
      CHECK(std::abs(r) == doctest::Approx(std::max(std::abs(z) - t, 0.0)));
      CHECK(r * z >= 0.0);
    }
}

TEST_CASE("SCAD threshold") {
  CHECK(scad_threshold(5.0, 1.0, 3.7) == 5.0);
  CHECK(scad_threshold(-5.0, 1.0, 3.7) == -5.0);
  CHECK(scad_threshold(1.5, 1.0, 3.7) == soft_threshold(1.5, 1.0));
  // univariate grid search of 0.5 (b - z)^2 + penalty
  PenaltySpec spec = PenaltySpec::scad();
  for (double z : {3.0, -2.4, 0.7, 3.6}) {
    double best = INFINITY, arg = 0.0;
    for (double b = -6.0; b <= 6.0; b += 1e-4) {
      const double l = 1.0, A = 3.7, a = std::abs(b);
      const double pen = a <= l ? l * a : a <= A * l ? -(a * a - 2 * A * l * a + l * l) / (2 * (A - 1)) : (A + 1) * l * l / 2;
      const double f = 0.5 * (b - z) * (b - z) + pen;
      if (f < best) {
        best = f;
        arg = b;
      }
    }
    CHECK(std::abs(scad_threshold(z, 1.0, 3.7) - arg) < 1e-3);
  }
  // continuity across the branch points
  for (double z : {2.0, 3.7}) {
    CHECK(std::abs(scad_threshold(z - 1e-9, 1.0, 3.7) - scad_threshold(z + 1e-9, 1.0, 3.7)) < 1e-8);
  }
}

TEST_CASE("SCAD penalty matches its integral form") {
  for (double t : {0.3, 1.0, 2.0, 3.0, 3.7, 6.0}) {
    const double ref = oracle::simpson(
        [](double u) { return u <= 1.0 ? 1.0 : std::max(3.7 - u, 0.0) / 2.7; }, 0.0, t, 20000);
    CHECK(scad_penalty(t, 1.0, 3.7) == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("adaptive weights") {
  CHECK(alasso_weights(Vector{1, 1}, 1.0) == Vector{1, 1});
  const Vector w = alasso_weights(Vector{2, -0.5}, 1.0);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(2.0));
  CHECK(alasso_weights(Vector{0.0}, 1.0)[0] == 1e8);
  CHECK(alasso_weights(Vector{4.0}, 2.0)[0] == doctest::Approx(1.0 / 16.0));
  CHECK_THROWS_AS(alasso_weights(Vector{1.0}, 0.0), DomainError);
}

TEST_CASE("lambda path") {
  const StandardizedData s = standardize(oracle::random_matrix(60, 6, 4), gaussian_vector(60, 5));
  double lm = 0.0;
  for (std::size_t j = 0; j < 6; ++j) {
    double c = 0.0;
    for (std::size_t i = 0; i < 60; ++i) c += s.xs(i, j) * s.ys[i];
    lm = std::max(lm, std::abs(c) / 60.0);
  }
  const Vector path = lambda_path(s, PenaltySpec::lasso(), 50);
  CHECK(path.size() == 50);
  CHECK(path[0] == doctest::Approx(lm).epsilon(1e-12));
  CHECK(path.back() == doctest::Approx(1e-3 * lm).epsilon(1e-12));
  for (std::size_t k = 1; k < path.size(); ++k) {
    CHECK(path[k] < path[k - 1]);
    CHECK(std::log(path[k - 1] / path[k]) == doctest::Approx(std::log(1e3) / 49.0).epsilon(1e-9));
  }
  const Vector two = lambda_path(s, PenaltySpec::lasso(), 2);
  CHECK(two == Vector{lm, 1e-3 * lm});
  CHECK(lambda_path(s, PenaltySpec::elastic_net(0.5), 10)[0] == doctest::Approx(2.0 * lm).epsilon(1e-12));
  CHECK_THROWS_AS(lambda_path(s, PenaltySpec::lasso(), 1), DomainError);

  for (const auto& spec : {PenaltySpec::lasso(), PenaltySpec::elastic_net(0.3)}) {
    const double top = lambda_path(s, spec, 5)[0];
    for (double v : cd_fit(s, spec, top)) CHECK(v == 0.0);
    bool nonzero = false;
    for (double v : cd_fit(s, spec, 0.99 * top)) nonzero |= v != 0.0;
    CHECK(nonzero);
  }
}

TEST_CASE("orthonormal design closed forms") {
  const Matrix x = orthonormal_design(80, 5, 17);
  Vector y = x * Vector{2.0, -1.0, 0.3, 0.0, 0.05};
  const Vector noise = gaussian_vector(80, 18);
  for (std::size_t i = 0; i < 80; ++i) y[i] += 0.3 * noise[i];
  const StandardizedData s = standardize(x, y);
  for (double c : s.col_scales) CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
  for (double lam : {0.05, 0.2, 0.6, 1.2}) {
    const Vector b = cd_fit(s, PenaltySpec::lasso(), lam);
    const Vector sc = cd_fit(s, PenaltySpec::scad(), lam);
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(std::abs(b[j] - soft_threshold(s.corr[j], lam)) < 1e-8);
      CHECK(std::abs(sc[j] - scad_threshold(s.corr[j], lam, 3.7)) < 1e-8);
    }
  }
}

TEST_CASE("two-dimensional grid oracle") {
  const Matrix x = correlated_design(40, 2, 0.6, 23);
  Vector y = x * Vector{1.0, -0.5};
  const Vector e = gaussian_vector(40, 24);
  for (std::size_t i = 0; i < 40; ++i) y[i] += e[i];
  const StandardizedData s = standardize(x, y);
  // quadratic form of the loss so the grid scan is cheap
  const double yy = squared_norm(s.ys) / 40.0;
  for (const PenaltySpec& spec0 : {PenaltySpec::lasso(), PenaltySpec::elastic_net(0.5), PenaltySpec::adaptive_lasso()}) {
    const PenaltySpec spec = with_resolved_weights(s, spec0);
    const double lam = 0.2 * lambda_max(s, spec);
    const Vector b = cd_fit(s, spec, lam);
    const double fb = objective_oracle(s, spec, lam, b);
    const Vector w = spec.weights ? *spec.weights : Vector{1.0, 1.0};
    double best = INFINITY;
    for (int i = -3000; i <= 3000; ++i)
      for (int k = -3000; k <= 3000; ++k) {
        const double b0 = i * 1e-3, b1 = k * 1e-3;
        const double loss = 0.5 * (yy - 2.0 * (s.corr[0] * b0 + s.corr[1] * b1) + s.cov(0, 0) * b0 * b0 +
                                   2.0 * s.cov(0, 1) * b0 * b1 + s.cov(1, 1) * b1 * b1);
        double pen;
        if (spec.kind == PenaltyKind::EN)
          pen = lam * (0.5 * (std::abs(b0) + std::abs(b1)) + 0.5 * (b0 * b0 + b1 * b1));
        else
          pen = lam * (w[0] * std::abs(b0) + w[1] * std::abs(b1));
        best = std::min(best, loss + pen);
      }
    CHECK(fb <= best + 1e-5);
  }
}

TEST_CASE("KKT certification on random convex instances") {
  std::mt19937_64 g(99);
  int checked = 0;
  for (int inst = 0; inst < 500; ++inst) {
    const std::size_t p = 2 + g() % 9;
    const std::size_t n = p + 10 + g() % 60;
    const double rho = (g() % 10) / 10.0;
    const Matrix x = correlated_design(n, p, rho, 1000 + inst);
    Vector beta_true = gaussian_vector(p, 5000 + inst);
    for (std::size_t j = 0; j < p; ++j)
      if (g() % 2) beta_true[j] = 0.0;
    Vector y = x * beta_true;
    const Vector e = gaussian_vector(n, 9000 + inst);
    for (std::size_t i = 0; i < n; ++i) y[i] += e[i];
    const StandardizedData s = standardize(x, y);
    PenaltySpec spec;
    switch (inst % 3) {
      case 0: spec = PenaltySpec::lasso(); break;
      case 1: spec = PenaltySpec::elastic_net(0.1 + 0.9 * (g() % 100) / 100.0); break;
      default: spec = with_resolved_weights(s, PenaltySpec::adaptive_lasso());
    }
    const double lam = lambda_max(s, spec) * std::pow(10.0, -3.0 * (g() % 1000) / 1000.0);
    const Vector b = cd_fit(s, spec, lam);
    CHECK(kkt_oracle(s, spec, lam, b) <= 1e-6);
    CHECK(kkt_violation(s, spec, lam, b) <= 1e-6);
    ++checked;
  }
  CHECK(checked == 500);
}

TEST_CASE("objective never increases across sweeps") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix x = correlated_design(60, 8, 0.8, seed);
    const Vector y = gaussian_vector(60, seed + 50);
    const StandardizedData s = standardize(x, y);
    for (const PenaltySpec& spec : {PenaltySpec::lasso(), PenaltySpec::elastic_net(0.25)}) {
      const double lam = 0.05 * lambda_max(s, spec);
      double prev = objective_oracle(s, spec, lam, Vector(8, 0.0));
      int sweeps = 0;
      CdOptions opt;
      opt.on_sweep = [&](int, const Vector& b) {
        const double f = objective_oracle(s, spec, lam, b);
        CHECK(f <= prev + 1e-12);
        prev = f;
        ++sweeps;
      };
      cd_fit(s, spec, lam, opt);
      CHECK(sweeps >= 1);
    }
  }
}

TEST_CASE("sweep limit is reported") {
  const StandardizedData s = standardize(correlated_design(60, 8, 0.95, 3), gaussian_vector(60, 4));
  CdOptions opt;
  opt.max_sweeps = 1;
  CHECK_THROWS_AS(cd_fit(s, PenaltySpec::lasso(), 1e-4, opt), MaxSweepsExceeded);
}

TEST_CASE("endpoint consistency of the penalty family") {
  const StandardizedData s = standardize(correlated_design(70, 6, 0.5, 31), gaussian_vector(70, 32));
  const double lam = 0.1 * lambda_max(s, PenaltySpec::lasso());
  const Vector lasso = cd_fit(s, PenaltySpec::lasso(), lam);
  const Vector en1 = cd_fit(s, PenaltySpec::elastic_net(1.0), lam);
  PenaltySpec unit = PenaltySpec::adaptive_lasso();
  unit.weights = Vector(6, 1.0);
  const Vector al = cd_fit(s, unit, lam);
  for (std::size_t j = 0; j < 6; ++j) {
    CHECK(std::abs(lasso[j] - en1[j]) <= 1e-10);
    CHECK(std::abs(lasso[j] - al[j]) <= 1e-10);
  }
  // small mix: EN approaches the ridge fit (C + 2 lambda (1 - mix) I)^{-1} corr
  const double mix = 1e-4;
  const Vector en = cd_fit(s, PenaltySpec::elastic_net(mix), lam);
  Matrix a = s.cov;
  for (std::size_t j = 0; j < 6; ++j) a(j, j) += 2.0 * lam * (1.0 - mix);
  const Vector rr = oracle::gauss_jordan_inverse(a) * s.corr;
  CHECK(std::sqrt(squared_distance(en, rr)) < 1e-3 * std::sqrt(squared_norm(rr)) + 1e-3);
  CHECK(squared_norm(en) < squared_norm(spd_solve(s.cov, s.corr)));
}

TEST_CASE("fold assignment") {
  const auto a = fold_assignment(103, 10, 7);
  CHECK(a == fold_assignment(103, 10, 7));
  CHECK(a != fold_assignment(103, 10, 8));
  std::vector<int> count(10, 0);
  for (int f : a) ++count[f];
  for (int c : count) CHECK((c == 10 || c == 11));
}

TEST_CASE("cross-validation configuration errors") {
  const Matrix x = oracle::random_matrix(15, 3, 1);
  const Vector y = gaussian_vector(15, 2);
  CHECK_THROWS_AS(cross_validate(x, y, PenaltySpec::lasso(), 10, 20, 1), FoldTooSmall);
  CHECK_THROWS_AS(cross_validate(x, y, PenaltySpec::lasso(), 1, 20, 1), ConfigError);
  CHECK_THROWS_AS(cross_validate(x, y, PenaltySpec::lasso(), 16, 20, 1), ConfigError);
  CHECK_NOTHROW(cross_validate(x, y, PenaltySpec::lasso(), 5, 20, 1));
}

TEST_CASE("cross-validation is deterministic and well formed") {
  const RegressionData d(correlated_design(100, 10, 0.2, 5), gaussian_vector(100, 6));
  const PathResult a = cross_validate(d, PenaltySpec::elastic_net(0.5), 10, 50, 42);
  const PathResult b = cross_validate(d, PenaltySpec::elastic_net(0.5), 10, 50, 42);
  CHECK(a.lambdas == b.lambdas);
  CHECK(*a.cv_errors == *b.cv_errors);
  CHECK(*a.chosen_index == *b.chosen_index);
  for (std::size_t k = 0; k < a.betas_by_lambda.size(); ++k) CHECK(a.betas_by_lambda[k] == b.betas_by_lambda[k]);
  const Vector& err = *a.cv_errors;
  const std::size_t k = *a.chosen_index;
  for (std::size_t j = 0; j < err.size(); ++j) {
    CHECK(err[k] <= err[j]);
    if (err[j] == err[k]) CHECK(k <= j);
  }
  for (double v : a.betas_by_lambda.front()) CHECK(v == 0.0);
}

TEST_CASE("pure noise favours heavy penalties") {
  int upper = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const RegressionData d(oracle::random_matrix(100, 10, seed), gaussian_vector(100, seed + 777));
    const PathResult r = cross_validate(d, PenaltySpec::lasso(), 10, 50, seed);
    upper += *r.chosen_index < 25;
  }
  CHECK(upper >= 40);
}

TEST_CASE("strong signal on an orthonormal design selects a small penalty") {
  const Matrix x = orthonormal_design(100, 5, 71);
  const Vector truth{3, -2, 4, 1.5, -3};
  Vector y = x * truth;
  const Vector e = gaussian_vector(100, 72);
  for (std::size_t i = 0; i < 100; ++i) y[i] += 0.5 * e[i];
  const RegressionData d(x, y);
  const PathResult r = cross_validate(d, PenaltySpec::lasso(), 10, 50, 3);
  CHECK(*r.chosen_index >= 25);
  const Vector l = lse(d).beta;
  const Vector& b = r.betas_by_lambda[*r.chosen_index];
  CHECK(std::sqrt(squared_distance(b, l)) <= 0.1 * std::sqrt(squared_norm(l)));
}

TEST_CASE("penalized fits beat least squares under the null") {
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Matrix x = oracle::random_matrix(100, 10, seed);
    const Vector y = gaussian_vector(100, seed + 4242);
    const RegressionData d(x, y);
    const CoefficientEstimate f = fit_penalized(d, PenaltySpec::lasso(), 10, seed);
    wins += squared_norm(f.beta) < squared_norm(lse(d).beta);
  }
  CHECK(wins >= 180);
}

TEST_CASE("fit_penalized records its tuning") {
  const RegressionData d(oracle::random_matrix(60, 4, 1), gaussian_vector(60, 2));
  const auto en = fit_penalized(d, PenaltySpec::elastic_net(0.25), 5, 1);
  CHECK(en.id == EstimatorId::EN);
  CHECK(en.tuning.at("mix") == 0.25);
  CHECK(en.tuning.count("lambda") == 1);
  CHECK(fit_penalized(d, PenaltySpec::scad(), 5, 1).tuning.at("scad_a") == 3.7);
  CHECK(fit_penalized(d, PenaltySpec::adaptive_lasso(), 5, 1).tuning.at("gamma") == 1.0);
}

TEST_CASE("noiseless recovery at the end of the path") {
  const Matrix x = correlated_design(80, 6, 0.3, 13);
  const Vector truth{1, 0, 0, 0, 0, 0};
  const RegressionData d(x, x * truth);
  for (const PenaltySpec& spec : {PenaltySpec::lasso(), PenaltySpec::elastic_net(0.9), PenaltySpec::scad()}) {
    const PathResult r = cross_validate(d, spec, 10, 50, 1);
    const Vector& b = r.betas_by_lambda.back();
    for (std::size_t j = 0; j < 6; ++j) CHECK(std::abs(b[j] - truth[j]) < 1e-2);
  }
}

TEST_CASE("SCAD leaves large coefficients unbiased") {
  const Matrix x = correlated_design(100, 5, 0.3, 61);
  const Vector truth{8, -6, 10, 7, -9};
  Vector y = x * truth;
  const Vector e = gaussian_vector(100, 62);
  for (std::size_t i = 0; i < 100; ++i) y[i] += e[i];
  const RegressionData d(x, y);
  const CoefficientEstimate f = fit_penalized(d, PenaltySpec::scad(), 10, 5);
  // penalized fits are centred, so compare with least squares plus an intercept
  Matrix xi(100, 6);
  for (std::size_t i = 0; i < 100; ++i) {
    xi(i, 0) = 1.0;
    for (std::size_t j = 0; j < 5; ++j) xi(i, j + 1) = x(i, j);
  }
  const Vector li = lse(RegressionData(xi, y)).beta;
  const Vector l(li.begin() + 1, li.end());
  const StandardizedData s = standardize(d);
  const double lam = f.tuning.at("lambda");
  for (std::size_t j = 0; j < 5; ++j) {
    REQUIRE(std::abs(l[j] * s.col_scales[j]) > 3.7 * lam);
    CHECK(std::abs(f.beta[j] - l[j]) < 1e-4);
  }
}

TEST_CASE("fits converge when the design is at or below full rank") {
  // centred data with n rows has rank n - 1, so n <= p + 1 leaves the Gram matrix singular
  for (std::size_t n : {36u, 40u, 41u, 44u}) {
    const std::size_t p = 40;
    const Matrix x = correlated_design(n, p, 0.3, 700 + n);
    Vector y = gaussian_vector(n, 800 + n);
    for (std::size_t i = 0; i < n; ++i) y[i] += x(i, 0) + x(i, 1);
    const StandardizedData s = standardize(x, y);
    for (const PenaltySpec& spec : {PenaltySpec::lasso(), PenaltySpec::elastic_net(0.75)}) {
      const Vector path = lambda_path(s, spec, 50);
      Vector b(p, 0.0);
      for (double lam : path) {
        double prev = objective_oracle(s, spec, lam, b);
        CdOptions opt;
        opt.on_sweep = [&](int, const Vector& cur) {
          const double f = objective_oracle(s, spec, lam, cur);
          CHECK(f <= prev + 1e-12 * (1.0 + std::abs(prev)));
          prev = f;
        };
        REQUIRE_NOTHROW(cd_fit_inplace(s, spec, lam, b, opt));
        CHECK(kkt_oracle(s, spec, lam, b) <= 1e-6);
      }
    }
  }
}
