#pragma once

// Empirical checks of the Hessian regularity conditions on a given design,
// and exact numeric checks of the two technical lemmas (chi-square tail and
// radial integral bound).

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "glmev/glm.hpp"

namespace glmev {

struct SpectrumBounds {
  double c_lower = 0.0;  // min smallest eigenvalue of H_J(beta)/n
  double c_upper = 0.0;  // max largest eigenvalue of H_J(beta)/n
  std::uint64_t betas_sampled = 0;
};

// Bounds over an explicit sample of coefficient vectors for one model.
SpectrumBounds spectrum_bounds_at(const Dataset& ds, const ModelIndex& J, const std::vector<CoefVector>& betas);

// `draws` betas uniform in the radius ball of each R^J; per-model streams
// derive from (seed, J), so more draws extend the same sample.
SpectrumBounds estimate_spectrum_bounds(const Dataset& ds, const std::vector<ModelIndex>& models, double radius,
                                        int draws, std::uint64_t seed);

struct HessianLipschitzEstimate {
  double c_change = 0.0;
  std::uint64_t pairs_used = 0;
  std::uint64_t degenerate_skipped = 0;  // ||beta - beta'|| < 1e-12
};

HessianLipschitzEstimate hessian_lipschitz_at(const Dataset& ds, const ModelIndex& J,
                                              const std::vector<std::pair<CoefVector, CoefVector>>& pairs);

HessianLipschitzEstimate estimate_hessian_lipschitz(const Dataset& ds, const std::vector<ModelIndex>& models,
                                                    double radius, int pair_draws, std::uint64_t seed);

struct SandwichResult {
  bool ok = true;
  // Smallest eigenvalue seen over both difference matrices, all samples.
  double worst_eigenvalue = 0.0;
  std::uint64_t draws = 0;
};

// (1-eps) H(beta0) <= H(beta) <= (1+eps) H(beta0) for betas sampled
// uniformly in the delta ball around beta0 (coefficients over J).
SandwichResult check_sandwich(const Dataset& ds, const ModelIndex& J, const CoefVector& beta0, double delta,
                              double epsilon, int draws, std::uint64_t seed);

// Same check on explicit samples.
SandwichResult sandwich_at(const Dataset& ds, const ModelIndex& J, const CoefVector& beta0,
                           const std::vector<CoefVector>& betas, double epsilon);

// Restriction of a full-length p-vector to the coordinates in J.
CoefVector restrict_to(const Eigen::VectorXd& full, const ModelIndex& J);

// Uniform draw in the ball of given radius in R^dim.
std::vector<CoefVector> sample_ball(int dim, double radius, int count, std::uint64_t seed);

enum class LemmaKind { kChiSquareTail, kRadialIntegral };
std::string_view to_string(LemmaKind k);

struct LemmaCase {
  std::vector<double> params;  // (k, n) or (k, a, b)
  double margin = 0.0;         // >= 0 means the inequality holds
  bool violated = false;
};

struct LemmaReport {
  LemmaKind lemma = LemmaKind::kChiSquareTail;
  std::vector<LemmaCase> grid;
  int violations = 0;
  double worst_margin = 0.0;
  // Radial lemma only: max relative gap between the incomplete-gamma value
  // and adaptive quadrature of the same integral.
  double max_crosscheck_rel_error = 0.0;
};

// P{chi2_k <= 5k log n} >= 1 - n^-k >= exp(-1/sqrt n), checked in log form:
// margin = min(-k log n - log P{chi2_k > 5k log n}, log(1 - n^-k) + 1/sqrt n).
LemmaReport verify_chisq_tail_lemma(const std::vector<int>& k_values, const std::vector<double>& n_values);

struct RadialCase {
  int k = 1;
  double a = 1.0;
  double b = 1.0;
};

// Exact tail integral of exp(-b|xi|) outside the a-ball in R^k, via the
// upper incomplete gamma, against 4 pi^(k/2) / Gamma(k/2) * a^(k-1)/b * e^(-ab).
// Throws PreconditionViolated when ab < 2(k-1).
LemmaReport verify_radial_integral_lemma(const std::vector<RadialCase>& cases);

// log of the exact integral, 2 pi^(k/2) / (b^k Gamma(k/2)) * Gamma(k, ab).
double log_radial_tail_integral(int k, double a, double b);
double log_radial_tail_bound(int k, double a, double b);

// Gamma(k, x) by adaptive Gauss-Kronrod on the shifted tail, in log form.
double log_upper_gamma_by_quadrature(int k, double x);

std::vector<int> default_chisq_k_values();
std::vector<double> default_chisq_n_values();
std::vector<RadialCase> default_radial_cases();

}  // namespace glmev
