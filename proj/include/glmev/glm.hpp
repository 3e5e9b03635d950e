#pragma once

// Canonical-link exponential-family regression: cumulant functions, the
// immutable Dataset, model index sets, and the likelihood / score / negative
// Hessian of a submodel.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace glmev {

enum class FamilyKind { kLogistic, kPoisson };

std::string_view to_string(FamilyKind kind);
FamilyKind parse_family(std::string_view name);

// Cumulant b(theta) and its first two derivatives for a family.
class Family {
 public:
  explicit Family(FamilyKind kind) : kind_(kind) {}

  FamilyKind kind() const { return kind_; }

  double cumulant(double theta) const;
  double mean(double theta) const;
  double variance(double theta) const;

  // Whether y is an admissible response value.
  bool admits(double y) const;

  friend bool operator==(const Family&, const Family&) = default;

 private:
  FamilyKind kind_;
};

// Coefficients of a submodel, stored in the order of the ModelIndex entries.
using CoefVector = Eigen::VectorXd;

/// Sorted set of active covariates, 1-based as in all external formats.
class ModelIndex {
 public:
  ModelIndex() = default;
  // Throws ContractViolation unless strictly increasing and >= 1.
  explicit ModelIndex(std::vector<int> indices);

  // Accepts "1,4,7", "1;4;7" or "" (empty model).
  static ModelIndex parse(std::string_view text);

  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  int operator[](std::size_t k) const { return idx_[k]; }
  int max_index() const { return idx_.empty() ? 0 : idx_.back(); }
  const std::vector<int>& indices() const { return idx_; }
  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

  bool contains(int j) const;
  bool is_subset_of(const ModelIndex& other) const;

  // Semicolon-joined, "" for the empty model.
  std::string to_string() const;
  // Stable 64-bit hash of the index list.
  std::uint64_t hash() const;

  friend auto operator<=>(const ModelIndex&, const ModelIndex&) = default;
  friend bool operator==(const ModelIndex&, const ModelIndex&) = default;

 private:
  std::vector<int> idx_;
};

// Canonical tie order: smaller cardinality first, then lexicographic.
bool canonical_less(const ModelIndex& a, const ModelIndex& b);

/// Fixed design X (n x p), response Y, and family. Immutable after
/// construction; validated on entry.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd X, Eigen::VectorXd Y, FamilyKind family);

  Eigen::Index n() const { return X_.rows(); }
  Eigen::Index p() const { return X_.cols(); }
  const Eigen::MatrixXd& X() const { return X_; }
  const Eigen::VectorXd& Y() const { return Y_; }
  const Family& family() const { return family_; }

  // n x |J| copy of the active columns. Throws if J exceeds p.
  Eigen::MatrixXd columns(const ModelIndex& J) const;
  void check_model(const ModelIndex& J) const;

 private:
  Eigen::MatrixXd X_;
  Eigen::VectorXd Y_;
  Family family_;
};

double log_likelihood(const Dataset& ds, const ModelIndex& J, const CoefVector& beta);
Eigen::VectorXd score(const Dataset& ds, const ModelIndex& J, const CoefVector& beta);
Eigen::MatrixXd neg_hessian(const Dataset& ds, const ModelIndex& J, const CoefVector& beta);

// Log-likelihood of one submodel evaluated at many coefficient vectors at
// once. Used by the Monte Carlo and quadrature estimators, which dominate
// run time; log_likelihood() above is the reference path.
class BatchLogLikelihood {
 public:
  BatchLogLikelihood(const Dataset& ds, const ModelIndex& J);

  Eigen::Index dim() const { return XJ_.cols(); }

  // betas is |J| x m; writes m log-likelihood values.
  void evaluate(const Eigen::MatrixXd& betas, Eigen::Ref<Eigen::VectorXd> out) const;

 private:
  Eigen::MatrixXd XJ_;
  Eigen::VectorXd XtY_;
  Family family_;
};

}  // namespace glmev
