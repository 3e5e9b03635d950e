#include "glmev/simgen.hpp"

#include <cmath>
#include <string>

#include "glmev/errors.hpp"
#include "glmev/rng.hpp"

namespace glmev {

void SimConfig::validate() const {
  require(n >= 1 && p >= 1, "simulation needs n, p >= 1");
  require(q_true >= 0 && q_true <= p, "simulation needs 0 <= q_true <= p");
  require(std::isfinite(amplitude), "amplitude must be finite");
}

void ScalingConfig::validate() const {
  require(kappa > 0.0, "kappa must be positive");
  require(psi >= 0.0 && psi < 1.0 / 3.0, "psi must lie in [0, 1/3)");
  require(phi >= 0.0 && phi < 1.0 - psi, "phi must lie in [0, 1 - psi)");
  require(kappa > psi, "kappa must exceed psi");
  require(gamma >= 0.0, "gamma must be nonnegative");
}

double ScalingConfig::gamma_threshold() const {
  return 1.0 - (1.0 - 2.0 * psi) / (2.0 * (kappa - psi));
}

ScaledSizes scaling_config_instantiate(const ScalingConfig& sc, int n) {
  sc.validate();
  require(n >= 2, "scaling needs n >= 2");
  const double nd = static_cast<double>(n);
  ScaledSizes out;
  out.p = static_cast<int>(std::ceil(std::pow(nd, sc.kappa)));
  out.q = static_cast<int>(std::ceil(std::pow(nd, sc.psi)));
  out.beta_min = std::pow(nd, -0.5 * sc.phi);
  return out;
}

Eigen::MatrixXd generate_design(int n, int p, std::uint64_t seed) {
  require(n >= 1 && p >= 1, "generate_design needs n, p >= 1");
  NormalStream normals(seed);
  Eigen::MatrixXd X(n, p);
  // Row-major fill so that row i is the i-th covariate vector drawn.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = normals.next();
  return X;
}

Eigen::VectorXd make_beta0(const SimConfig& cfg) {
  cfg.validate();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(cfg.p);
  b.head(cfg.q_true).setConstant(cfg.amplitude);
  return b;
}

ModelIndex true_support(const SimConfig& cfg) {
  std::vector<int> idx;
  for (int j = 1; j <= cfg.q_true; ++j) idx.push_back(j);
  return ModelIndex(std::move(idx));
}

Eigen::VectorXd generate_response(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta0, FamilyKind family,
                                  std::uint64_t seed) {
  require(X.cols() == beta0.size(), "generate_response: beta0 length does not match design");
  const Family fam(family);
  const Eigen::VectorXd eta = X * beta0;
  Xoshiro256 gen(seed);
  Eigen::VectorXd y(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double mu = fam.mean(eta[i]);
    if (family == FamilyKind::kLogistic) {
      y[i] = gen.uniform() < mu ? 1.0 : 0.0;
    } else {
      if (!(mu <= 1e12)) {
        throw Error(ErrorKind::kOverflow, "Poisson mean " + std::to_string(mu) + " at row " + std::to_string(i + 1));
      }
      y[i] = static_cast<double>(sample_poisson(gen, mu));
    }
  }
  return y;
}

Dataset simulate(const SimConfig& cfg) {
  cfg.validate();
  Eigen::MatrixXd X = generate_design(cfg.n, cfg.p, derive_seed(cfg.seed, {1}));
  Eigen::VectorXd y = generate_response(X, make_beta0(cfg), cfg.family, derive_seed(cfg.seed, {2}));
  return Dataset(std::move(X), std::move(y), cfg.family);
}

}  // namespace glmev
