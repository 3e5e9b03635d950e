#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "glmev/errors.hpp"
#include "glmev/fit.hpp"

using namespace glmev;

namespace {

ErrorKind fit_error_kind(const Dataset& ds, const ModelIndex& J, const FitOptions& opts = {}) {
  try {
    fit_mle(ds, J, opts);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("fit unexpectedly succeeded");
  return ErrorKind::kContractViolation;
}

}  // namespace

TEST_CASE("intercept-only fits hit the closed form") {
  Eigen::VectorXd y(8);
  y << 1, 1, 1, 0, 1, 1, 0, 1;
  const Dataset lg(Eigen::MatrixXd::Ones(8, 1), y, FamilyKind::kLogistic);
  const auto f = fit_mle(lg, ModelIndex({1}));
  CHECK(f.converged);
  CHECK(f.beta_hat[0] == doctest::Approx(std::log(3.0)).epsilon(1e-9));

  Eigen::VectorXd yp(4);
  yp << 1, 4, 2, 3;
  const Dataset po(Eigen::MatrixXd::Ones(4, 1), yp, FamilyKind::kPoisson);
  CHECK(fit_mle(po, ModelIndex({1})).beta_hat[0] == doctest::Approx(std::log(2.5)).epsilon(1e-9));
}

TEST_CASE("perfectly separated data raises Separation") {
  for (int n : {4, 8, 20, 200}) {
    CAPTURE(n);
    Eigen::VectorXd y(n);
    Eigen::MatrixXd X(n, 1);
    for (int i = 0; i < n; ++i) {
      y[i] = i % 2;
      X(i, 0) = y[i] - 0.5;
    }
    const Dataset ds(X, y, FamilyKind::kLogistic);
    CHECK(fit_error_kind(ds, ModelIndex({1})) == ErrorKind::kSeparation);
  }
}

TEST_CASE("rank-deficient design raises SingularHessian") {
  const auto base = fixtures::sim(50, 2, 1, 1.0, 4);
  Eigen::MatrixXd X = base.X();
  X.col(1) = 2.0 * X.col(0);
  const Dataset ds(X, base.Y(), FamilyKind::kLogistic);
  CHECK(fit_error_kind(ds, ModelIndex({1, 2})) == ErrorKind::kSingularHessian);
}

TEST_CASE("iteration limit raises NoConvergence") {
  const auto ds = fixtures::sim(100, 3, 2, 1.0, 4);
  FitOptions opts;
  opts.max_iter = 1;
  CHECK(fit_error_kind(ds, ModelIndex({1, 2}), opts) == ErrorKind::kNoConvergence);
  opts.grad_tol = 1e-15;
  CHECK_THROWS_AS(opts.validate(), Error);
}

TEST_CASE("two-dimensional fit agrees with a grid search") {
  // Coarse grid over [-5, 5]^2 at step 0.1, then a 1e-3 grid within 0.2 of
  // the coarse winner; concavity makes the refinement exhaustive.
  const auto ds = fixtures::sim(200, 4, 2, 1.0, 31);
  const ModelIndex J({1, 2});
  const auto fit = fit_mle(ds, J);
  auto ll = [&](double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return log_likelihood(ds, J, v);
  };
  double best = -INFINITY, ba = 0, bb = 0;
  for (int i = -50; i <= 50; ++i)
    for (int j = -50; j <= 50; ++j)
      if (const double v = ll(0.1 * i, 0.1 * j); v > best) best = v, ba = 0.1 * i, bb = 0.1 * j;
  const double ca = ba, cb = bb;
  for (int i = -200; i <= 200; ++i)
    for (int j = -200; j <= 200; ++j)
      if (const double v = ll(ca + 1e-3 * i, cb + 1e-3 * j); v > best) best = v, ba = ca + 1e-3 * i, bb = cb + 1e-3 * j;
  CHECK(std::abs(fit.beta_hat[0] - ba) <= 2e-3);
  CHECK(std::abs(fit.beta_hat[1] - bb) <= 2e-3);
}

TEST_CASE("converged fits are stationary with a positive definite Hessian and monotone ascent") {
  Xoshiro256 gen(8);
  for (int r = 0; r < 30; ++r) {
    const auto family = r % 3 == 0 ? FamilyKind::kPoisson : FamilyKind::kLogistic;
    const auto ds = fixtures::sim(150, 8, 2, family == FamilyKind::kPoisson ? 0.5 : 1.5, 40 + r, family);
    const auto J = fixtures::random_model(8, 1 + r % 4, gen);
    const auto f = fit_mle(ds, J);
    CHECK(f.converged);
    CHECK(f.score_supnorm <= FitOptions{}.grad_tol);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(f.hessian_at_opt).eigenvalues().minCoeff() > 0.0);
    REQUIRE(f.loglik_trace.size() >= 1);
    for (std::size_t k = 1; k < f.loglik_trace.size(); ++k) CHECK(f.loglik_trace[k] >= f.loglik_trace[k - 1] - 1e-12);
    CHECK(f.loglik >= log_likelihood(ds, J, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(J.size()))));
  }
}

TEST_CASE("reordering covariates permutes the estimate") {
  const auto ds = fixtures::sim(120, 3, 2, 1.0, 12);
  Eigen::MatrixXd X(ds.n(), 3);
  X.col(0) = ds.X().col(2);
  X.col(1) = ds.X().col(0);
  X.col(2) = ds.X().col(1);
  const Dataset perm(X, ds.Y(), FamilyKind::kLogistic);
  const auto a = fit_mle(ds, ModelIndex({1, 2, 3}));
  const auto b = fit_mle(perm, ModelIndex({1, 2, 3}));
  CHECK(std::abs(a.beta_hat[0] - b.beta_hat[1]) <= 1e-9);
  CHECK(std::abs(a.beta_hat[1] - b.beta_hat[2]) <= 1e-9);
  CHECK(std::abs(a.beta_hat[2] - b.beta_hat[0]) <= 1e-9);
  CHECK(std::abs(a.loglik - b.loglik) <= 1e-12 * std::max(1.0, std::abs(a.loglik)));
}

TEST_CASE("nested models have nested maximized log-likelihoods") {
  const auto ds = fixtures::sim(150, 6, 2, 1.0, 77);
  const ModelIndex chain[] = {ModelIndex(), ModelIndex({3}), ModelIndex({1, 3}), ModelIndex({1, 3, 6}),
                              ModelIndex({1, 2, 3, 6})};
  for (std::size_t k = 1; k < std::size(chain); ++k) {
    CHECK(fit_mle(ds, chain[k]).loglik >= fit_mle(ds, chain[k - 1]).loglik - 1e-10);
  }
}

TEST_CASE("empty model fit is trivial") {
  const auto ds = fixtures::sim(30, 2, 1, 1.0, 3);
  const auto f = fit_mle(ds, ModelIndex());
  CHECK(f.converged);
  CHECK(f.beta_hat.size() == 0);
  CHECK(f.loglik == doctest::Approx(-30 * std::log(2.0)));
}

TEST_CASE("MLE norm check") {
  FitResult f;
  f.converged = true;
  f.beta_hat = Eigen::Vector2d(3, 4);
  CHECK(check_mle_norm(f, 5.0));
  CHECK_FALSE(check_mle_norm(f, 4.9));
}

TEST_CASE("simulated fits stay bounded") {
  const auto ds = fixtures::sim(100, 50, 2, 2.0, 5);
  Xoshiro256 gen(6);
  int converged = 0, bounded = 0;
  for (int r = 0; r < 100; ++r) {
    try {
      const auto f = fit_mle(ds, fixtures::random_model(50, 1 + r % 2, gen));
      ++converged;
      bounded += check_mle_norm(f, 10.0);
    } catch (const Error&) {
    }
  }
  CHECK(converged > 0);
  CHECK(bounded == converged);
}

TEST_CASE("log-determinant via Cholesky") {
  Eigen::Matrix2d A;
  A << 4, 1, 1, 3;
  CHECK(log_det_spd(A) == doctest::Approx(std::log(11.0)).epsilon(1e-14));
  CHECK(log_det_spd(Eigen::MatrixXd(0, 0)) == 0.0);
  Eigen::Matrix2d S;
  S << 1, 1, 1, 1;
  CHECK_THROWS_AS(log_det_spd(S), Error);
}
