#include "glmev/model_space.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "glmev/errors.hpp"
#include "glmev/evidence.hpp"
#include "glmev/parallel.hpp"

namespace glmev {

ModelEnumerator::ModelEnumerator(int p, int q) : p_(p), q_(q) {
  require(p >= 1 && q >= 0 && q <= p, "enumerate_models needs 0 <= q <= p");
}

bool ModelEnumerator::next(ModelIndex& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    out = ModelIndex();
    return true;
  }
  // Advance to the next k-combination of {1..p}; on exhaustion move to k+1.
  int k = size_;
  int i = k - 1;
  while (i >= 0 && cur_[static_cast<std::size_t>(i)] == p_ - k + i + 1) --i;
  if (i < 0) {
    if (size_ == q_) {
      done_ = true;
      return false;
    }
    ++size_;
    cur_.resize(static_cast<std::size_t>(size_));
    for (int a = 0; a < size_; ++a) cur_[static_cast<std::size_t>(a)] = a + 1;
  } else {
    ++cur_[static_cast<std::size_t>(i)];
    for (int a = i + 1; a < k; ++a) cur_[static_cast<std::size_t>(a)] = cur_[static_cast<std::size_t>(a - 1)] + 1;
  }
  out = ModelIndex(cur_);
  return true;
}

std::vector<ModelIndex> enumerate_models(int p, int q) {
  std::vector<ModelIndex> out;
  ModelEnumerator it(p, q);
  ModelIndex J;
  while (it.next(J)) out.push_back(J);
  return out;
}

std::uint64_t count_models(int p, int q) {
  require(p >= 1 && q >= 0 && q <= p, "count_models needs 0 <= q <= p");
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  unsigned __int128 c = 1;
  unsigned __int128 total = 1;
  for (int k = 1; k <= q; ++k) {
    c = c * static_cast<unsigned>(p - k + 1) / static_cast<unsigned>(k);
    total += c;
    if (total > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(total);
}

void check_budget(int p, int q, std::uint64_t budget) {
  const std::uint64_t count = count_models(p, q);
  if (count > budget) {
    throw Error(ErrorKind::kBudgetExceeded, std::to_string(count) + " models with p=" + std::to_string(p) +
                                                ", q=" + std::to_string(q) + " exceed budget " +
                                                std::to_string(budget));
  }
}

void ModelPrior::validate() const {
  require(gamma >= 0.0 && std::isfinite(gamma), "model prior gamma must be >= 0");
  require(p >= 1 && q_max >= 0 && q_max <= p, "model prior needs 0 <= q_max <= p");
}

double log_binomial(int p, int k) {
  return std::lgamma(p + 1.0) - std::lgamma(k + 1.0) - std::lgamma(p - k + 1.0);
}

double log_model_prior(const ModelPrior& mp, const ModelIndex& J) {
  mp.validate();
  const int k = static_cast<int>(J.size());
  require(k <= mp.p, "log_model_prior: |J| exceeds p");
  if (k > mp.q_max) return -std::numeric_limits<double>::infinity();
  if (mp.gamma == 0.0) return 0.0;
  return -mp.gamma * log_binomial(mp.p, k);
}

std::string_view to_string(FitStatus s) {
  switch (s) {
    case FitStatus::kOk: return "ok";
    case FitStatus::kSeparated: return "separated";
    case FitStatus::kFailed: return "failed";
  }
  return "failed";
}

std::string_view to_string(ScoreKind k) {
  return k == ScoreKind::kLaplaceGamma ? "laplace_gamma" : "bayes_gamma";
}

ScoreKind parse_score_kind(std::string_view name) {
  if (name == "laplace" || name == "laplace_gamma") return ScoreKind::kLaplaceGamma;
  if (name == "bayes" || name == "bayes_gamma") return ScoreKind::kBayesGamma;
  throw Error(ErrorKind::kParseError, "unknown score method '" + std::string(name) + "'");
}

ModelScore score_laplace_gamma(const Dataset& ds, const ModelIndex& J, const PriorSpec& prior,
                               const ModelPrior& mp, const FitOptions& fit_opts) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const double lp = log_model_prior(mp, J);
  try {
    const FitResult fit = fit_mle(ds, J, fit_opts);
    return {J, lp + log_laplace_evidence(ds, J, prior, fit).log_value, FitStatus::kOk};
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::kSeparation: return {J, kNegInf, FitStatus::kSeparated};
      case ErrorKind::kNoConvergence:
      case ErrorKind::kSingularHessian:
      case ErrorKind::kNumeric: return {J, kNegInf, FitStatus::kFailed};
      default: throw;
    }
  }
}

ModelScore score_bayes_gamma(const Dataset& ds, const ModelIndex& J, const PriorSpec& prior,
                             const ModelPrior& mp, std::uint64_t B, std::uint64_t seed) {
  const double lp = log_model_prior(mp, J);
  return {J, lp + log_mc_evidence(ds, J, prior, B, seed).log_value, FitStatus::kOk};
}

std::optional<ModelIndex> best_model(const std::vector<ModelScore>& scores) {
  const ModelScore* best = nullptr;
  for (const auto& s : scores) {
    if (!std::isfinite(s.score)) continue;
    if (best == nullptr || s.score > best->score ||
        (s.score == best->score && canonical_less(s.J, best->J))) {
      best = &s;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->J;
}

ScanResult select_model(const Dataset& ds, const PriorSpec& prior, const ModelPrior& mp,
                        const SelectOptions& opts) {
  mp.validate();
  require(mp.p == ds.p(), "model prior p does not match dataset");
  check_budget(mp.p, mp.q_max, opts.budget);
  const std::vector<ModelIndex> models = enumerate_models(mp.p, mp.q_max);

  ScanResult res;
  res.score_kind = opts.method;
  res.scores.resize(models.size());
  parallel_for(models.size(), opts.workers, [&](std::size_t i) {
    res.scores[i] = opts.method == ScoreKind::kLaplaceGamma
                        ? score_laplace_gamma(ds, models[i], prior, mp, opts.fit)
                        : score_bayes_gamma(ds, models[i], prior, mp, opts.B, opts.seed);
  });
  res.models_scored = models.size();
  // The empty model always scores finitely, so an argmax exists.
  res.best = best_model(res.scores).value_or(ModelIndex());
  return res;
}

}  // namespace glmev
