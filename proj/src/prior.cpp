#include "glmev/prior.hpp"

#include <cmath>
#include <numbers>

#include "glmev/errors.hpp"
#include "glmev/rng.hpp"

namespace glmev {

void PriorSpec::validate() const {
  require(std::isfinite(sigma) && sigma > 0.0, "prior sigma must be positive and finite");
}

double log_prior_density(const PriorSpec& prior, const ModelIndex& J, const CoefVector& beta) {
  prior.validate();
  require(beta.size() == static_cast<Eigen::Index>(J.size()), "prior: coefficient length does not match |J|");
  if (J.empty()) return 0.0;
  const double k = static_cast<double>(J.size());
  const double s2 = prior.sigma * prior.sigma;
  return -0.5 * k * std::log(2.0 * std::numbers::pi * s2) - beta.squaredNorm() / (2.0 * s2);
}

std::uint64_t model_stream_seed(std::uint64_t seed, const ModelIndex& J) {
  return derive_seed(seed, {J.hash()});
}

std::vector<CoefVector> sample_prior(const PriorSpec& prior, const ModelIndex& J, std::uint64_t seed,
                                     std::size_t count) {
  prior.validate();
  require(count >= 1, "sample_prior: count must be positive");
  NormalStream normals(model_stream_seed(seed, J));
  const auto k = static_cast<Eigen::Index>(J.size());
  std::vector<CoefVector> out(count, CoefVector(k));
  for (auto& beta : out) {
    for (Eigen::Index a = 0; a < k; ++a) beta[a] = prior.sigma * normals.next();
  }
  return out;
}

LipschitzConstants lipschitz_constants(const PriorSpec& prior, double radius) {
  prior.validate();
  require(radius > 0.0, "lipschitz_constants: radius must be positive");
  // Gradient of log f is -beta / sigma^2, so |grad| <= R / sigma^2 on the
  // ball; log f is maximized at 0, hence F2 = 0.
  return {radius / (prior.sigma * prior.sigma), 0.0};
}

}  // namespace glmev
