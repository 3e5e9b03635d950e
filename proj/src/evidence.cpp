#include "glmev/evidence.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "glmev/errors.hpp"
#include "glmev/logsumexp.hpp"
#include "glmev/model_space.hpp"
#include "glmev/parallel.hpp"
#include "glmev/quadrature.hpp"
#include "glmev/rng.hpp"

namespace glmev {

namespace {

constexpr Eigen::Index kBlock = 256;

void check_fit(const FitResult& fit, const ModelIndex& J) {
  require(fit.converged, "evidence needs a converged fit");
  require(fit.J == J, "fit was computed for a different model");
}

}  // namespace

std::string_view to_string(EvidenceMethod m) {
  switch (m) {
    case EvidenceMethod::kLaplace: return "laplace";
    case EvidenceMethod::kMonteCarlo: return "montecarlo";
    case EvidenceMethod::kQuadrature: return "quadrature";
  }
  return "laplace";
}

EvidenceEstimate log_laplace_evidence(const Dataset& ds, const ModelIndex& J, const PriorSpec& prior,
                                      const FitResult& fit) {
  check_fit(fit, J);
  const double k = static_cast<double>(J.size());
  const double log_det = log_det_spd(fit.hessian_at_opt);
  EvidenceEstimate est;
  est.J = J;
  est.method = EvidenceMethod::kLaplace;
  est.log_value = log_likelihood(ds, J, fit.beta_hat) + log_prior_density(prior, J, fit.beta_hat) +
                  0.5 * k * std::log(2.0 * std::numbers::pi) - 0.5 * log_det;
  return est;
}

EvidenceEstimate log_mc_evidence(const Dataset& ds, const ModelIndex& J, const PriorSpec& prior,
                                 std::uint64_t B, std::uint64_t seed) {
  require(B >= 2, "Monte Carlo needs B >= 2");
  prior.validate();
  ds.check_model(J);
  EvidenceEstimate est;
  est.J = J;
  est.method = EvidenceMethod::kMonteCarlo;
  est.mc_draws = B;
  est.seed = seed;
  if (J.empty()) {
    est.log_value = log_likelihood(ds, J, CoefVector());
    est.mc_std_error = 0.0;
    return est;
  }

  const BatchLogLikelihood loglik(ds, J);
  const auto k = static_cast<Eigen::Index>(J.size());
  NormalStream normals(model_stream_seed(seed, J));
  LogSumExp acc;
  Eigen::MatrixXd betas(k, kBlock);
  Eigen::VectorXd values(kBlock);
  std::uint64_t remaining = B;
  while (remaining > 0) {
    const auto m = static_cast<Eigen::Index>(std::min<std::uint64_t>(remaining, kBlock));
    if (m != betas.cols()) {
      betas.resize(k, m);
      values.resize(m);
    }
    for (Eigen::Index b = 0; b < m; ++b)
      for (Eigen::Index a = 0; a < k; ++a) betas(a, b) = prior.sigma * normals.next();
    loglik.evaluate(betas, values);
    for (Eigen::Index b = 0; b < m; ++b) acc.add(values[b]);
    remaining -= static_cast<std::uint64_t>(m);
  }
  est.log_value = acc.log_mean();
  est.mc_std_error = acc.log_mean_std_error();
  if (!std::isfinite(est.log_value)) throw Error(ErrorKind::kNumeric, "Monte Carlo evidence is not finite");
  return est;
}

EvidenceEstimate log_quadrature_evidence(const Dataset& ds, const ModelIndex& J, const PriorSpec& prior,
                                         const FitResult& fit, const QuadratureOptions& opts) {
  if (J.size() > kMaxQuadratureDim) {
    throw Error(ErrorKind::kDimensionTooLarge,
                "quadrature supports |J| <= 3, got " + std::to_string(J.size()));
  }
  check_fit(fit, J);
  require(opts.half_width_sds > 0.0 && opts.points_per_dim >= 1, "invalid quadrature options");
  EvidenceEstimate est;
  est.J = J;
  est.method = EvidenceMethod::kQuadrature;
  if (J.empty()) {
    est.log_value = log_likelihood(ds, J, CoefVector());
    return est;
  }

  const auto d = static_cast<Eigen::Index>(J.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fit.hessian_at_opt);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorKind::kSingularHessian, "Hessian at the MLE is not positive definite");
  }
  // Columns of `axes` are eigenvectors scaled by 1/sqrt(eigenvalue).
  const Eigen::VectorXd scales = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd axes = eig.eigenvectors() * scales.asDiagonal();
  const double log_jacobian = scales.array().log().sum();

  const QuadratureRule rule = gauss_legendre(opts.points_per_dim);
  const auto P = static_cast<std::size_t>(opts.points_per_dim);
  std::vector<double> z(P), logw(P);
  for (std::size_t i = 0; i < P; ++i) {
    z[i] = opts.half_width_sds * rule.nodes[i];
    logw[i] = std::log(opts.half_width_sds * rule.weights[i]);
  }

  std::size_t total = 1;
  for (Eigen::Index a = 0; a < d; ++a) total *= P;

  const BatchLogLikelihood loglik(ds, J);
  LogSumExp acc;
  Eigen::MatrixXd betas(d, kBlock);
  Eigen::VectorXd values(kBlock);
  std::vector<double> block_logw(kBlock);
  Eigen::VectorXd u(d);
  std::vector<std::size_t> digit(static_cast<std::size_t>(d), 0);
  std::size_t done = 0;
  while (done < total) {
    const auto m = static_cast<Eigen::Index>(std::min<std::size_t>(total - done, kBlock));
    if (m != betas.cols()) {
      betas.resize(d, m);
      values.resize(m);
    }
    for (Eigen::Index b = 0; b < m; ++b) {
      double lw = 0.0;
      for (Eigen::Index a = 0; a < d; ++a) {
        u[a] = z[digit[static_cast<std::size_t>(a)]];
        lw += logw[digit[static_cast<std::size_t>(a)]];
      }
      betas.col(b) = fit.beta_hat + axes * u;
      block_logw[static_cast<std::size_t>(b)] = lw;
      for (std::size_t a = 0; a < digit.size(); ++a) {
        if (++digit[a] < P) break;
        digit[a] = 0;
      }
    }
    loglik.evaluate(betas, values);
    for (Eigen::Index b = 0; b < m; ++b) {
      acc.add(block_logw[static_cast<std::size_t>(b)] + values[b] +
              log_prior_density(prior, J, betas.col(b)));
    }
    done += static_cast<std::size_t>(m);
  }
  est.log_value = acc.log_sum() + log_jacobian;
  if (!std::isfinite(est.log_value)) throw Error(ErrorKind::kNumeric, "quadrature evidence is not finite");
  return est;
}

LaplaceErrorReport laplace_error_max(const Dataset& ds, int q, const PriorSpec& prior, std::uint64_t B,
                                     std::uint64_t seed, std::uint64_t budget, unsigned workers,
                                     const FitOptions& fit_opts) {
  require(q >= 1, "laplace_error_max needs q >= 1");
  const int p = static_cast<int>(ds.p());
  require(q <= p, "laplace_error_max needs q <= p");
  check_budget(p, q, budget);
  const std::vector<ModelIndex> models = enumerate_models(p, q);

  enum class Outcome { kOk, kSeparated, kFailed };
  std::vector<double> errors(models.size(), 0.0);
  std::vector<Outcome> outcome(models.size(), Outcome::kOk);
  parallel_for(models.size(), workers, [&](std::size_t i) {
    const ModelIndex& J = models[i];
    try {
      const FitResult fit = fit_mle(ds, J, fit_opts);
      const double lap = log_laplace_evidence(ds, J, prior, fit).log_value;
      const double mc = log_mc_evidence(ds, J, prior, B, seed).log_value;
      errors[i] = std::fabs(mc - lap);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kSeparation) {
        outcome[i] = Outcome::kSeparated;
      } else if (e.kind() == ErrorKind::kNoConvergence || e.kind() == ErrorKind::kSingularHessian) {
        outcome[i] = Outcome::kFailed;
      } else {
        throw;
      }
    }
  });

  LaplaceErrorReport rep;
  bool have = false;
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (outcome[i] == Outcome::kSeparated) {
      ++rep.separated_count;
      continue;
    }
    if (outcome[i] == Outcome::kFailed) {
      ++rep.failed_count;
      continue;
    }
    ++rep.models_scored;
    if (!have || errors[i] > rep.max_error || (errors[i] == rep.max_error && models[i] < rep.argmax)) {
      rep.max_error = errors[i];
      rep.argmax = models[i];
      have = true;
    }
  }
  return rep;
}

}  // namespace glmev
