#include "glmev/fit.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "glmev/errors.hpp"

namespace glmev {

void FitOptions::validate() const {
  require(grad_tol >= 1e-14, "grad_tol must be >= 1e-14");
  require(max_iter > 0 && step_halvings > 0, "iteration limits must be positive");
  require(max_coef_norm > 0.0, "max_coef_norm must be positive");
  require(step_tol > 0.0, "step_tol must be positive");
}

bool spd_factor(const Eigen::MatrixXd& A, Eigen::LLT<Eigen::MatrixXd>& llt) {
  if (A.rows() == 0) {
    llt.compute(A);
    return true;
  }
  llt.compute(A);
  if (llt.info() != Eigen::Success) return false;
  const double scale = A.diagonal().cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double d = llt.matrixLLT()(i, i);
    if (!(d * d > 1e-14 * scale)) return false;
  }
  return true;
}

double log_det_spd(const Eigen::MatrixXd& A) {
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!spd_factor(A, llt)) throw Error(ErrorKind::kSingularHessian, "matrix is not positive definite");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) acc += std::log(llt.matrixLLT()(i, i));
  return 2.0 * acc;
}

namespace {

Eigen::VectorXd newton_direction(const Eigen::MatrixXd& H, const Eigen::VectorXd& s) {
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (spd_factor(H, llt)) return llt.solve(s);
  const double k = static_cast<double>(H.rows());
  Eigen::MatrixXd jittered = H;
  jittered.diagonal().array() += 1e-8 * H.trace() / k;
  if (spd_factor(jittered, llt)) return llt.solve(s);
  throw Error(ErrorKind::kSingularHessian, "Newton system is singular");
}

// Trial points with overflowing likelihood count as a decrease.
double loglik_or_minus_inf(const Dataset& ds, const ModelIndex& J, const CoefVector& beta) {
  if (!beta.allFinite()) return -std::numeric_limits<double>::infinity();
  try {
    return log_likelihood(ds, J, beta);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNumeric) throw;
    return -std::numeric_limits<double>::infinity();
  }
}

}  // namespace

FitResult fit_mle(const Dataset& ds, const ModelIndex& J, const FitOptions& opts) {
  opts.validate();
  ds.check_model(J);
  const auto k = static_cast<Eigen::Index>(J.size());

  FitResult res;
  res.J = J;
  CoefVector beta = CoefVector::Zero(k);
  double ll = log_likelihood(ds, J, beta);
  res.loglik_trace.push_back(ll);

  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd s = score(ds, J, beta);
    const double sup = k == 0 ? 0.0 : s.cwiseAbs().maxCoeff();
    const Eigen::MatrixXd H = neg_hessian(ds, J, beta);
    if (sup <= opts.grad_tol) {
      Eigen::LLT<Eigen::MatrixXd> llt;
      if (!spd_factor(H, llt)) {
        throw Error(ErrorKind::kSingularHessian, "Hessian at the optimum of model {" + J.to_string() +
                                                     "} is not positive definite");
      }
      // Along a separating direction the score and the Hessian vanish
      // together, so a small score alone does not mean an interior optimum.
      const double step = k == 0 ? 0.0 : llt.solve(s).cwiseAbs().maxCoeff();
      if (step <= opts.step_tol) {
        res.hessian_at_opt = H;
        res.beta_hat = beta;
        res.loglik = ll;
        res.score_supnorm = sup;
        res.iterations = iter;
        res.converged = true;
        return res;
      }
    }
    if (iter >= opts.max_iter) {
      throw Error(ErrorKind::kNoConvergence, "model {" + J.to_string() + "}: score sup-norm " +
                                                 std::to_string(sup) + " after " + std::to_string(iter) +
                                                 " iterations");
    }

    const Eigen::VectorXd d = newton_direction(H, s);
    // Near the optimum the gain is below rounding of ll.
    constexpr double slack = 1e-12;
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opts.step_halvings; ++h, t *= 0.5) {
      CoefVector trial = beta + t * d;
      const double ll_trial = loglik_or_minus_inf(ds, J, trial);
      if (ll_trial >= ll - slack) {
        beta = std::move(trial);
        ll = ll_trial;
        res.loglik_trace.push_back(ll);
        accepted = true;
        break;
      }
    }
    if (accepted && beta.norm() > opts.max_coef_norm) {
      throw Error(ErrorKind::kSeparation, "model {" + J.to_string() + "}: coefficient norm exceeds " +
                                              std::to_string(opts.max_coef_norm));
    }
    if (!accepted) {
      throw Error(ErrorKind::kNoConvergence, "model {" + J.to_string() + "}: line search failed with score sup-norm " +
                                                 std::to_string(sup));
    }
  }
}

bool check_mle_norm(const FitResult& fit, double a_mle) {
  require(fit.converged, "check_mle_norm needs a converged fit");
  return fit.beta_hat.norm() <= a_mle;
}

}  // namespace glmev
