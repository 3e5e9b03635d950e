#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "glmev/fit.hpp"
#include "glmev/glm.hpp"
#include "glmev/prior.hpp"

namespace glmev {

// Walks all J with |J| <= q in canonical order: by size, then
// lexicographically.
class ModelEnumerator {
 public:
  ModelEnumerator(int p, int q);

  // Writes the next model into `out`; false once exhausted.
  bool next(ModelIndex& out);

 private:
  int p_;
  int q_;
  int size_ = 0;
  std::vector<int> cur_;
  bool started_ = false;
  bool done_ = false;
};

std::vector<ModelIndex> enumerate_models(int p, int q);

// sum_{k<=q} C(p, k), saturating at UINT64_MAX.
std::uint64_t count_models(int p, int q);

// Binomial-type model prior P(J) proportional to C(p,|J|)^-gamma 1{|J| <= q_max}.
struct ModelPrior {
  double gamma = 1.0;
  int q_max = 1;
  int p = 1;

  void validate() const;
};

double log_binomial(int p, int k);

// Unnormalized; -inf outside the support.
double log_model_prior(const ModelPrior& mp, const ModelIndex& J);

enum class FitStatus { kOk, kSeparated, kFailed };
enum class ScoreKind { kLaplaceGamma, kBayesGamma };

std::string_view to_string(FitStatus s);
std::string_view to_string(ScoreKind k);
ScoreKind parse_score_kind(std::string_view name);

struct ModelScore {
  ModelIndex J;
  double score = 0.0;
  FitStatus status = FitStatus::kOk;
};

// log P(J) + log Laplace(J). Fit failures give -inf with the status set.
ModelScore score_laplace_gamma(const Dataset& ds, const ModelIndex& J, const PriorSpec& prior,
                               const ModelPrior& mp, const FitOptions& fit_opts = {});

// log P(J) + log MC(J). Needs no MLE, so status is always ok.
ModelScore score_bayes_gamma(const Dataset& ds, const ModelIndex& J, const PriorSpec& prior,
                             const ModelPrior& mp, std::uint64_t B, std::uint64_t seed);

struct ScanResult {
  std::vector<ModelScore> scores;  // enumeration order
  ModelIndex best;
  ScoreKind score_kind = ScoreKind::kLaplaceGamma;
  std::uint64_t models_scored = 0;
};

// Argmax of finite scores; ties go to the canonical_less model. Result does
// not depend on the order of `scores`.
std::optional<ModelIndex> best_model(const std::vector<ModelScore>& scores);

struct SelectOptions {
  ScoreKind method = ScoreKind::kLaplaceGamma;
  std::uint64_t B = 20'000;
  std::uint64_t seed = 0;
  std::uint64_t budget = 1'000'000;
  unsigned workers = 1;
  FitOptions fit;
};

ScanResult select_model(const Dataset& ds, const PriorSpec& prior, const ModelPrior& mp,
                        const SelectOptions& opts);

// Throws BudgetExceeded when the |J| <= q lattice is larger than budget.
void check_budget(int p, int q, std::uint64_t budget);

}  // namespace glmev
