#pragma once

#include <vector>

#include "glmev/glm.hpp"

namespace glmev {

struct FitOptions {
  double grad_tol = 1e-8;       // sup-norm of the score at convergence
  double step_tol = 1e-6;       // sup-norm of the Newton step at convergence
  int max_iter = 100;
  double max_coef_norm = 40.0;  // ||beta||_2 beyond this is reported as Separation
  int step_halvings = 50;

  void validate() const;
};

struct FitResult {
  ModelIndex J;
  CoefVector beta_hat;
  double loglik = 0.0;
  double score_supnorm = 0.0;
  Eigen::MatrixXd hessian_at_opt;
  int iterations = 0;
  bool converged = false;
  std::vector<double> loglik_trace;  // logL at the start point and after each accepted step
};

/// Damped Newton ascent on the submodel log-likelihood, started at 0.
///
/// Stops when both the score and the Newton step H^-1 s are small.
/// Each iteration solves H d = s with a Cholesky factorization (one jittered
/// retry), then halves the step until the log-likelihood does not decrease.
/// Throws Error with kind Separation, NoConvergence or SingularHessian.
/// A returned result always has converged == true.
FitResult fit_mle(const Dataset& ds, const ModelIndex& J, const FitOptions& opts = {});

bool check_mle_norm(const FitResult& fit, double a_mle);

// Cholesky of a symmetric matrix that must be positive definite; returns
// false on failure or on a pivot that is non-positive relative to the
// largest diagonal entry.
bool spd_factor(const Eigen::MatrixXd& A, Eigen::LLT<Eigen::MatrixXd>& llt);

// Sum of log diagonal Cholesky factors, times two. Throws SingularHessian.
double log_det_spd(const Eigen::MatrixXd& A);

}  // namespace glmev
