#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "glmev/errors.hpp"
#include "glmev/evidence.hpp"
#include "glmev/logsumexp.hpp"

using namespace glmev;

TEST_CASE("streaming log-sum-exp") {
  LogSumExp acc;
  CHECK(acc.log_mean() == -INFINITY);
  for (double x : {-1000.0, -999.0, -1001.0}) acc.add(x);
  const double expected = -1000.0 + std::log((1.0 + std::exp(1.0) + std::exp(-1.0)) / 3.0);
  CHECK(acc.log_mean() == doctest::Approx(expected).epsilon(1e-14));
  CHECK(acc.log_sum() == doctest::Approx(expected + std::log(3.0)).epsilon(1e-14));

  LogSumExp flat;
  for (int i = 0; i < 1000; ++i) flat.add(-3.25);
  CHECK(flat.log_mean() == -3.25);
  CHECK(flat.log_mean_std_error() == 0.0);

  LogSumExp two;
  two.add(0.0);
  two.add(std::log(3.0));
  // weights 1, 3: mean 2, sd sqrt(2), se 1, se/mean 0.5
  CHECK(two.log_mean_std_error() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("empty model: all methods return logL(0) exactly") {
  const auto ds = fixtures::sim(8, 3, 1, 1.0, 2);
  const auto fit = fit_mle(ds, ModelIndex());
  const PriorSpec pr;
  const double ll0 = -8.0 * std::log(2.0);
  const auto la = log_laplace_evidence(ds, ModelIndex(), pr, fit);
  const auto mc = log_mc_evidence(ds, ModelIndex(), pr, 1000, 3);
  const auto qu = log_quadrature_evidence(ds, ModelIndex(), pr, fit);
  CHECK(la.log_value == doctest::Approx(ll0).epsilon(1e-15));
  CHECK(std::abs(la.log_value - mc.log_value) <= 1e-10);
  CHECK(std::abs(la.log_value - qu.log_value) <= 1e-10);
  REQUIRE(mc.mc_std_error.has_value());
  CHECK(*mc.mc_std_error == 0.0);
  CHECK_FALSE(la.mc_std_error.has_value());
  CHECK_FALSE(qu.mc_std_error.has_value());
}

TEST_CASE("Laplace formula terms") {
  const auto ds = fixtures::sim(100, 3, 2, 1.0, 6);
  const ModelIndex J({1, 2});
  const auto fit = fit_mle(ds, J);
  PriorSpec pr;
  pr.sigma = 1.3;
  const double expected = fit.loglik + log_prior_density(pr, J, fit.beta_hat) + std::log(2 * M_PI) -
                          0.5 * std::log(fit.hessian_at_opt.determinant());
  CHECK(log_laplace_evidence(ds, J, pr, fit).log_value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("duplicating every observation shifts the determinant term by -(|J|/2) log 2") {
  const auto ds = fixtures::sim(60, 3, 2, 1.0, 14);
  Eigen::MatrixXd X2(120, 3);
  X2 << ds.X(), ds.X();
  Eigen::VectorXd Y2(120);
  Y2 << ds.Y(), ds.Y();
  const Dataset dd(X2, Y2, FamilyKind::kLogistic);
  const PriorSpec pr;
  const ModelIndex J({1, 3});
  const auto f1 = fit_mle(ds, J);
  const auto f2 = fit_mle(dd, J);
  REQUIRE((f1.beta_hat - f2.beta_hat).cwiseAbs().maxCoeff() < 1e-8);
  const double l1 = log_laplace_evidence(ds, J, pr, f1).log_value;
  const double l2 = log_laplace_evidence(dd, J, pr, f2).log_value;
  const double other_terms = f2.loglik - f1.loglik + log_prior_density(pr, J, f2.beta_hat) -
                             log_prior_density(pr, J, f1.beta_hat);
  CHECK(std::abs(f2.loglik - 2.0 * f1.loglik) <= 1e-9);
  CHECK(l2 - l1 - other_terms == doctest::Approx(-std::log(2.0)).epsilon(1e-8));
}

TEST_CASE("Laplace evidence ignores covariates outside the model") {
  const auto ds = fixtures::sim(100, 3, 2, 1.0, 10);
  Eigen::MatrixXd X(100, 4);
  X << ds.X(), ds.X().col(0);
  const Dataset wide(X, ds.Y(), FamilyKind::kLogistic);
  const ModelIndex J({2, 3});
  const PriorSpec pr;
  CHECK(log_laplace_evidence(ds, J, pr, fit_mle(ds, J)).log_value ==
        log_laplace_evidence(wide, J, pr, fit_mle(wide, J)).log_value);
}

TEST_CASE("quadrature is stable in resolution and box width") {
  const auto ds = fixtures::sim(200, 2, 1, 1.0, 15);
  const ModelIndex J({1});
  const auto fit = fit_mle(ds, J);
  const PriorSpec pr;
  QuadratureOptions a, b;
  a.points_per_dim = 200;
  b.points_per_dim = 400;
  CHECK(std::abs(log_quadrature_evidence(ds, J, pr, fit, a).log_value -
                 log_quadrature_evidence(ds, J, pr, fit, b).log_value) <= 1e-6);
  a = b;
  a.half_width_sds = 10;
  b.half_width_sds = 14;
  CHECK(std::abs(log_quadrature_evidence(ds, J, pr, fit, a).log_value -
                 log_quadrature_evidence(ds, J, pr, fit, b).log_value) <= 1e-8);
}

TEST_CASE("quadrature dimension limit") {
  const auto ds = fixtures::sim(200, 4, 2, 1.0, 15);
  const ModelIndex J({1, 2, 3, 4});
  const auto fit = fit_mle(ds, J);
  try {
    log_quadrature_evidence(ds, J, PriorSpec{}, fit);
    FAIL("expected DimensionTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDimensionTooLarge);
  }
}

TEST_CASE("quadrature agrees with a fine midpoint sum in one dimension") {
  const auto ds = fixtures::sim(40, 1, 1, 0.5, 3);
  const ModelIndex J({1});
  const auto fit = fit_mle(ds, J);
  const PriorSpec pr;
  const double quad = log_quadrature_evidence(ds, J, pr, fit).log_value;
  LogSumExp acc;
  const double lo = -10.0, hi = 10.0;
  const int m = 400000;
  const double h = (hi - lo) / m;
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd b(1);
    b[0] = lo + (i + 0.5) * h;
    acc.add(log_likelihood(ds, J, b) + log_prior_density(pr, J, b));
  }
  CHECK(std::abs(acc.log_sum() + std::log(h) - quad) <= 1e-7);
}

TEST_CASE("Laplace, Monte Carlo and quadrature agree on a well-conditioned model") {
  const auto ds = fixtures::sim(200, 3, 1, 1.0, 19);
  const ModelIndex J({1});
  const auto fit = fit_mle(ds, J);
  const PriorSpec pr;
  const double quad = log_quadrature_evidence(ds, J, pr, fit).log_value;
  const double lap = log_laplace_evidence(ds, J, pr, fit).log_value;
  const auto mc = log_mc_evidence(ds, J, pr, 200000, 5);
  CHECK(std::abs(lap - quad) <= 0.05);
  CHECK(std::abs(mc.log_value - quad) <= 3.0 * *mc.mc_std_error);
}

TEST_CASE("Monte Carlo uses exactly the prior sampler's draws") {
  const auto ds = fixtures::sim(50, 3, 2, 1.0, 23);
  const ModelIndex J({1, 3});
  PriorSpec pr;
  pr.sigma = 0.8;
  const std::uint64_t B = 700;  // not a multiple of the block size
  LogSumExp acc;
  for (const auto& b : sample_prior(pr, J, 4, B)) acc.add(log_likelihood(ds, J, b));
  const auto mc = log_mc_evidence(ds, J, pr, B, 4);
  CHECK(mc.log_value == doctest::Approx(acc.log_mean()).epsilon(1e-12));
  CHECK(*mc.mc_std_error == doctest::Approx(acc.log_mean_std_error()).epsilon(1e-9));
  CHECK(*mc.mc_draws == B);
  CHECK(*mc.seed == 4);
  CHECK_THROWS_AS(log_mc_evidence(ds, J, pr, 1, 4), Error);
}

TEST_CASE("Monte Carlo is deterministic per seed") {
  const auto ds = fixtures::sim(50, 3, 2, 1.0, 23);
  const ModelIndex J({2});
  const auto a = log_mc_evidence(ds, J, PriorSpec{}, 5000, 8);
  const auto b = log_mc_evidence(ds, J, PriorSpec{}, 5000, 8);
  const auto c = log_mc_evidence(ds, J, PriorSpec{}, 5000, 9);
  CHECK(a.log_value == b.log_value);
  CHECK(a.log_value != c.log_value);
}

TEST_CASE("laplace_error_max with one covariate is the single-model gap") {
  const auto ds = fixtures::sim(100, 1, 1, 1.0, 29);
  const PriorSpec pr;
  const auto rep = laplace_error_max(ds, 1, pr, 20000, 7);
  const ModelIndex J({1});
  const auto fit = fit_mle(ds, J);
  const double gap = std::abs(log_mc_evidence(ds, J, pr, 20000, 7).log_value -
                              log_laplace_evidence(ds, J, pr, fit).log_value);
  CHECK(rep.max_error == gap);
  CHECK(rep.argmax == J);
  CHECK(rep.models_scored == 2);
  CHECK(rep.separated_count == 0);
}

TEST_CASE("laplace_error_max is deterministic and worker-count independent") {
  const auto ds = fixtures::sim(60, 8, 2, 2.0, 33);
  const auto a = laplace_error_max(ds, 2, PriorSpec{}, 2000, 3, 1'000'000, 1);
  const auto b = laplace_error_max(ds, 2, PriorSpec{}, 2000, 3, 1'000'000, 1);
  const auto c = laplace_error_max(ds, 2, PriorSpec{}, 2000, 3, 1'000'000, 3);
  CHECK(a.max_error == b.max_error);
  CHECK(a.max_error == c.max_error);
  CHECK(a.argmax == c.argmax);
  CHECK(a.models_scored == 37);
  CHECK(a.max_error > 0.0);
}

TEST_CASE("laplace_error_max enforces the model budget") {
  const auto ds = fixtures::sim(60, 8, 2, 2.0, 33);
  try {
    laplace_error_max(ds, 2, PriorSpec{}, 100, 3, 36);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kBudgetExceeded);
  }
}

TEST_CASE("laplace_error_max skips separated models") {
  const int n = 20;
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  const auto noise = fixtures::gaussian_vector(n, 2);
  for (int i = 0; i < n; ++i) {
    y[i] = i % 2;
    X(i, 0) = y[i] - 0.5;
    X(i, 1) = noise[i];
  }
  const Dataset ds(X, y, FamilyKind::kLogistic);
  const auto rep = laplace_error_max(ds, 1, PriorSpec{}, 1000, 3);
  CHECK(rep.separated_count == 1);
  CHECK(rep.models_scored == 2);
  CHECK(rep.argmax == ModelIndex({2}));
}
