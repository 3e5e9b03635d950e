#pragma once

#include <cstdint>
#include <vector>

#include "glmev/glm.hpp"

namespace glmev {

enum class PriorKind { kGaussianIid };

// Coefficient prior f_J on R^J. Only the i.i.d. centered Gaussian is
// provided; lipschitz_constants() is the hook for other families.
struct PriorSpec {
  PriorKind kind = PriorKind::kGaussianIid;
  double sigma = 1.0;

  void validate() const;
};

// Constants of the log-Lipschitz (F1) and bounded-ratio (F2) conditions on
// the ball of radius R.
struct LipschitzConstants {
  double f1 = 0.0;
  double f2 = 0.0;
};

double log_prior_density(const PriorSpec& prior, const ModelIndex& J, const CoefVector& beta);

// `count` i.i.d. draws. The stream is keyed by (seed, J), so the Monte Carlo
// estimator with the same seed sees exactly these draws.
std::vector<CoefVector> sample_prior(const PriorSpec& prior, const ModelIndex& J, std::uint64_t seed,
                                     std::size_t count);

// Seed of the normal stream used for model J under master seed `seed`.
std::uint64_t model_stream_seed(std::uint64_t seed, const ModelIndex& J);

LipschitzConstants lipschitz_constants(const PriorSpec& prior, double radius);

}  // namespace glmev
