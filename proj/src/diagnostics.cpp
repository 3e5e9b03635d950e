#include "glmev/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "glmev/errors.hpp"
#include "glmev/rng.hpp"
#include "glmev/special.hpp"

namespace glmev {

namespace {

constexpr double kPsdTol = 1e-9;

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::kNumeric, "eigenvalue computation failed");
  return eig.eigenvalues();
}

}  // namespace

std::vector<CoefVector> sample_ball(int dim, double radius, int count, std::uint64_t seed) {
  require(dim >= 1 && count >= 0 && radius >= 0.0, "sample_ball: bad arguments");
  NormalStream normals(seed);
  std::vector<CoefVector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) {
    CoefVector v(dim);
    double nrm = 0.0;
    do {
      for (int a = 0; a < dim; ++a) v[a] = normals.next();
      nrm = v.norm();
    } while (nrm == 0.0);
    const double r = radius * std::pow(normals.engine().uniform(), 1.0 / dim);
    out.push_back(v * (r / nrm));
  }
  return out;
}

CoefVector restrict_to(const Eigen::VectorXd& full, const ModelIndex& J) {
  require(J.max_index() <= full.size(), "restrict_to: index exceeds vector length");
  CoefVector out(static_cast<Eigen::Index>(J.size()));
  for (std::size_t k = 0; k < J.size(); ++k) out[static_cast<Eigen::Index>(k)] = full[J[k] - 1];
  return out;
}

SpectrumBounds spectrum_bounds_at(const Dataset& ds, const ModelIndex& J, const std::vector<CoefVector>& betas) {
  require(!J.empty(), "spectrum bounds need a nonempty model");
  SpectrumBounds sb;
  sb.c_lower = std::numeric_limits<double>::infinity();
  sb.c_upper = 0.0;
  const double n = static_cast<double>(ds.n());
  for (const auto& beta : betas) {
    const Eigen::VectorXd ev = sym_eigenvalues(neg_hessian(ds, J, beta) / n);
    sb.c_lower = std::min(sb.c_lower, ev.minCoeff());
    sb.c_upper = std::max(sb.c_upper, ev.maxCoeff());
    ++sb.betas_sampled;
  }
  return sb;
}

SpectrumBounds estimate_spectrum_bounds(const Dataset& ds, const std::vector<ModelIndex>& models, double radius,
                                        int draws, std::uint64_t seed) {
  require(draws >= 1 && radius > 0.0, "estimate_spectrum_bounds: need draws >= 1 and radius > 0");
  SpectrumBounds total;
  total.c_lower = std::numeric_limits<double>::infinity();
  for (const auto& J : models) {
    if (J.empty()) continue;
    const auto betas = sample_ball(static_cast<int>(J.size()), radius, draws, derive_seed(seed, {J.hash()}));
    const SpectrumBounds sb = spectrum_bounds_at(ds, J, betas);
    total.c_lower = std::min(total.c_lower, sb.c_lower);
    total.c_upper = std::max(total.c_upper, sb.c_upper);
    total.betas_sampled += sb.betas_sampled;
  }
  return total;
}

HessianLipschitzEstimate hessian_lipschitz_at(const Dataset& ds, const ModelIndex& J,
                                              const std::vector<std::pair<CoefVector, CoefVector>>& pairs) {
  HessianLipschitzEstimate est;
  const double n = static_cast<double>(ds.n());
  for (const auto& [b1, b2] : pairs) {
    const double dist = (b1 - b2).norm();
    if (dist < 1e-12) {
      ++est.degenerate_skipped;
      continue;
    }
    const Eigen::VectorXd ev = sym_eigenvalues(neg_hessian(ds, J, b1) - neg_hessian(ds, J, b2));
    const double spectral = ev.cwiseAbs().maxCoeff();
    est.c_change = std::max(est.c_change, spectral / (n * dist));
    ++est.pairs_used;
  }
  return est;
}

HessianLipschitzEstimate estimate_hessian_lipschitz(const Dataset& ds, const std::vector<ModelIndex>& models,
                                                    double radius, int pair_draws, std::uint64_t seed) {
  require(pair_draws >= 1 && radius > 0.0, "estimate_hessian_lipschitz: need pair_draws >= 1 and radius > 0");
  HessianLipschitzEstimate total;
  for (const auto& J : models) {
    if (J.empty()) continue;
    const int d = static_cast<int>(J.size());
    const auto first = sample_ball(d, radius, pair_draws, derive_seed(seed, {J.hash(), 1}));
    const auto second = sample_ball(d, radius, pair_draws, derive_seed(seed, {J.hash(), 2}));
    std::vector<std::pair<CoefVector, CoefVector>> pairs;
    pairs.reserve(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) pairs.emplace_back(first[i], second[i]);
    const auto est = hessian_lipschitz_at(ds, J, pairs);
    total.c_change = std::max(total.c_change, est.c_change);
    total.pairs_used += est.pairs_used;
    total.degenerate_skipped += est.degenerate_skipped;
  }
  return total;
}

SandwichResult sandwich_at(const Dataset& ds, const ModelIndex& J, const CoefVector& beta0,
                           const std::vector<CoefVector>& betas, double epsilon) {
  require(epsilon >= 0.0, "sandwich: epsilon must be nonnegative");
  SandwichResult res;
  res.worst_eigenvalue = std::numeric_limits<double>::infinity();
  if (J.empty()) {
    res.draws = betas.size();
    return res;
  }
  const Eigen::MatrixXd H0 = neg_hessian(ds, J, beta0);
  for (const auto& beta : betas) {
    const Eigen::MatrixXd H = neg_hessian(ds, J, beta);
    const double upper = sym_eigenvalues((1.0 + epsilon) * H0 - H).minCoeff();
    const double lower = sym_eigenvalues(H - (1.0 - epsilon) * H0).minCoeff();
    // Scale-free tolerance: eigenvalues are compared relative to ||H0||.
    const double scale = std::max(1.0, sym_eigenvalues(H0).maxCoeff());
    const double worst = std::min(upper, lower) / scale;
    res.worst_eigenvalue = std::min(res.worst_eigenvalue, worst);
    if (worst < -kPsdTol) res.ok = false;
    ++res.draws;
  }
  return res;
}

SandwichResult check_sandwich(const Dataset& ds, const ModelIndex& J, const CoefVector& beta0, double delta,
                              double epsilon, int draws, std::uint64_t seed) {
  require(delta >= 0.0 && draws >= 1, "check_sandwich: need delta >= 0 and draws >= 1");
  require(beta0.size() == static_cast<Eigen::Index>(J.size()), "check_sandwich: beta0 must be indexed by J");
  std::vector<CoefVector> betas;
  if (J.empty()) return sandwich_at(ds, J, beta0, betas, epsilon);
  for (auto& u : sample_ball(static_cast<int>(J.size()), delta, draws, derive_seed(seed, {J.hash()}))) {
    betas.push_back(beta0 + u);
  }
  return sandwich_at(ds, J, beta0, betas, epsilon);
}

std::string_view to_string(LemmaKind k) {
  return k == LemmaKind::kChiSquareTail ? "chisq_tail" : "radial_integral";
}

LemmaReport verify_chisq_tail_lemma(const std::vector<int>& k_values, const std::vector<double>& n_values) {
  LemmaReport rep;
  rep.lemma = LemmaKind::kChiSquareTail;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (int k : k_values) {
    require(k >= 1, "chi-square lemma needs k >= 1");
    for (double n : n_values) {
      require(n >= 3.0, "chi-square lemma needs n >= 3");
      const double kd = static_cast<double>(k);
      const double log_n = std::log(n);
      const double threshold = 5.0 * kd * log_n;
      // P{chi2 <= t} >= 1 - n^-k  <=>  log P{chi2 > t} <= -k log n
      const double m1 = -kd * log_n - log_chi_square_sf(kd, threshold);
      // 1 - n^-k >= exp(-1/sqrt n)  <=>  log1p(-n^-k) + 1/sqrt n >= 0
      const double m2 = std::log1p(-std::exp(-kd * log_n)) + 1.0 / std::sqrt(n);
      LemmaCase c;
      c.params = {kd, n};
      c.margin = std::min(m1, m2);
      c.violated = !(c.margin >= 0.0);
      if (c.violated) ++rep.violations;
      rep.worst_margin = std::min(rep.worst_margin, c.margin);
      rep.grid.push_back(std::move(c));
    }
  }
  return rep;
}

double log_radial_tail_integral(int k, double a, double b) {
  const double kd = static_cast<double>(k);
  return std::log(2.0) + 0.5 * kd * std::log(std::numbers::pi) - kd * std::log(b) - std::lgamma(0.5 * kd) +
         log_upper_gamma(kd, a * b);
}

double log_radial_tail_bound(int k, double a, double b) {
  const double kd = static_cast<double>(k);
  return std::log(4.0) + 0.5 * kd * std::log(std::numbers::pi) - std::lgamma(0.5 * kd) +
         (kd - 1.0) * std::log(a) - std::log(b) - a * b;
}

double log_upper_gamma_by_quadrature(int k, double x) {
  require(k >= 1 && x > 0.0, "log_upper_gamma_by_quadrature: need k >= 1, x > 0");
  // Gamma(k, x) = x^(k-1) e^-x * int_0^inf (1 + t/x)^(k-1) e^-t dt
  const double km1 = static_cast<double>(k - 1);
  auto f = [&](double t) { return std::exp(km1 * std::log1p(t / x) - t); };
  double err = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-14, &err);
  return km1 * std::log(x) - x + std::log(integral);
}

LemmaReport verify_radial_integral_lemma(const std::vector<RadialCase>& cases) {
  LemmaReport rep;
  rep.lemma = LemmaKind::kRadialIntegral;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& rc : cases) {
    require(rc.k >= 1 && rc.a > 0.0 && rc.b > 0.0, "radial lemma needs k >= 1 and a, b > 0");
    const double need = 2.0 * (rc.k - 1);
    if (rc.a * rc.b < need * (1.0 - 1e-12)) {
      throw Error(ErrorKind::kPreconditionViolated,
                  "ab = " + std::to_string(rc.a * rc.b) + " < 2(k-1) = " + std::to_string(need));
    }
    const double exact = log_radial_tail_integral(rc.k, rc.a, rc.b);
    const double bound = log_radial_tail_bound(rc.k, rc.a, rc.b);
    const double via_quad = log_upper_gamma_by_quadrature(rc.k, rc.a * rc.b);
    const double via_series = log_upper_gamma(static_cast<double>(rc.k), rc.a * rc.b);
    rep.max_crosscheck_rel_error = std::max(rep.max_crosscheck_rel_error, std::fabs(std::expm1(via_quad - via_series)));
    LemmaCase c;
    c.params = {static_cast<double>(rc.k), rc.a, rc.b};
    c.margin = bound - exact;
    c.violated = !(c.margin >= 0.0);
    if (c.violated) ++rep.violations;
    rep.worst_margin = std::min(rep.worst_margin, c.margin);
    rep.grid.push_back(std::move(c));
  }
  return rep;
}

std::vector<int> default_chisq_k_values() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

std::vector<double> default_chisq_n_values() { return {3.0, 10.0, 1e2, 1e3, 1e4}; }

std::vector<RadialCase> default_radial_cases() {
  // ab at the boundary 2(k-1) and at multiples above it, for several b.
  std::vector<RadialCase> out;
  for (int k = 1; k <= 10; ++k) {
    const double base = k == 1 ? 1.0 : 2.0 * (k - 1);
    for (double b : {0.5, 1.0, 2.0, 5.0}) {
      for (double mult : {1.0, 1.5, 3.0, 10.0}) out.push_back({k, base * mult / b, b});
    }
  }
  return out;
}

}  // namespace glmev
