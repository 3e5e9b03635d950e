#pragma once

#include <cstdint>

#include "glmev/glm.hpp"

namespace glmev {

// Synthetic logistic/Poisson data: N(0,1) design, beta0 with its first
// q_true entries equal to `amplitude`, responses from the canonical link.
struct SimConfig {
  int n = 100;
  int p = 50;
  int q_true = 2;
  double amplitude = 2.0;
  FamilyKind family = FamilyKind::kLogistic;
  std::uint64_t seed = 0;

  void validate() const;
};

// Growth regime p = n^kappa, q = n^psi, beta_min = n^(-phi/2).
struct ScalingConfig {
  double kappa = 0.6;
  double psi = 0.0;
  double phi = 0.0;
  double gamma = 1.0;

  void validate() const;
  // gamma > 1 - (1 - 2 psi) / (2 (kappa - psi))
  double gamma_threshold() const;
  bool gamma_sufficient() const { return gamma > gamma_threshold(); }
};

struct ScaledSizes {
  int p = 1;
  int q = 1;
  double beta_min = 1.0;
};

// Ceiling-rounded (p, q) and beta_min for sample size n.
ScaledSizes scaling_config_instantiate(const ScalingConfig& sc, int n);

Eigen::MatrixXd generate_design(int n, int p, std::uint64_t seed);

// Full-length beta0 (length p).
Eigen::VectorXd make_beta0(const SimConfig& cfg);
ModelIndex true_support(const SimConfig& cfg);

// Throws Overflow when a Poisson mean exceeds 1e12.
Eigen::VectorXd generate_response(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta0, FamilyKind family,
                                  std::uint64_t seed);

// Design from derive_seed(seed, {1}), response from derive_seed(seed, {2}).
Dataset simulate(const SimConfig& cfg);

}  // namespace glmev
