#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "glmev/fit.hpp"
#include "glmev/glm.hpp"
#include "glmev/prior.hpp"

namespace glmev {

enum class EvidenceMethod { kLaplace, kMonteCarlo, kQuadrature };

std::string_view to_string(EvidenceMethod m);

struct EvidenceEstimate {
  ModelIndex J;
  double log_value = 0.0;
  EvidenceMethod method = EvidenceMethod::kLaplace;
  // Monte Carlo only.
  std::optional<double> mc_std_error;
  std::optional<std::uint64_t> mc_draws;
  std::optional<std::uint64_t> seed;
};

inline constexpr std::uint64_t kDefaultMcDraws = 50'000;

// log L(b) + log f(b) + (|J|/2) log 2pi - (1/2) log det H at b = MLE.
EvidenceEstimate log_laplace_evidence(const Dataset& ds, const ModelIndex& J, const PriorSpec& prior,
                                      const FitResult& fit);

/// Plain prior-sampling Monte Carlo: log of (1/B) sum_b L(beta_b), beta_b ~ f_J.
///
/// Draws are exactly sample_prior(prior, J, seed, B), consumed in blocks.
EvidenceEstimate log_mc_evidence(const Dataset& ds, const ModelIndex& J, const PriorSpec& prior,
                                 std::uint64_t B, std::uint64_t seed);

struct QuadratureOptions {
  double half_width_sds = 12.0;
  int points_per_dim = 400;
};

inline constexpr std::size_t kMaxQuadratureDim = 3;

// Tensor Gauss-Legendre over a box in the eigenbasis of H(MLE), centered at
// the MLE with half-widths half_width_sds / sqrt(eigenvalue). |J| <= 3.
EvidenceEstimate log_quadrature_evidence(const Dataset& ds, const ModelIndex& J, const PriorSpec& prior,
                                         const FitResult& fit, const QuadratureOptions& opts = {});

struct LaplaceErrorReport {
  double max_error = 0.0;
  ModelIndex argmax;          // model attaining max_error
  std::uint64_t models_scored = 0;
  std::uint64_t separated_count = 0;
  std::uint64_t failed_count = 0;  // NoConvergence / SingularHessian
};

inline constexpr std::uint64_t kDefaultModelBudget = 1'000'000;

// max over |J| <= q of |log MC(J) - log Laplace(J)|. Models whose fit fails
// are skipped and counted. Per-model MC seeds come from (seed, J).
LaplaceErrorReport laplace_error_max(const Dataset& ds, int q, const PriorSpec& prior, std::uint64_t B,
                                     std::uint64_t seed, std::uint64_t budget = kDefaultModelBudget,
                                     unsigned workers = 1, const FitOptions& fit_opts = {});

}  // namespace glmev
