#include "glmev/glm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "glmev/errors.hpp"
#include "glmev/rng.hpp"

namespace glmev {

std::string_view to_string(FamilyKind kind) {
  return kind == FamilyKind::kLogistic ? "logistic" : "poisson";
}

FamilyKind parse_family(std::string_view name) {
  if (name == "logistic") return FamilyKind::kLogistic;
  if (name == "poisson") return FamilyKind::kPoisson;
  throw Error(ErrorKind::kParseError, "unknown family '" + std::string(name) + "'");
}

double Family::cumulant(double theta) const {
  if (kind_ == FamilyKind::kPoisson) return std::exp(theta);
  // log(1 + e^theta) without overflow.
  return std::max(theta, 0.0) + std::log1p(std::exp(-std::fabs(theta)));
}

double Family::mean(double theta) const {
  if (kind_ == FamilyKind::kPoisson) return std::exp(theta);
  if (theta >= 0.0) return 1.0 / (1.0 + std::exp(-theta));
  const double e = std::exp(theta);
  return e / (1.0 + e);
}

double Family::variance(double theta) const {
  if (kind_ == FamilyKind::kPoisson) return std::exp(theta);
  const double e = std::exp(-std::fabs(theta));
  return e / ((1.0 + e) * (1.0 + e));
}

bool Family::admits(double y) const {
  if (kind_ == FamilyKind::kLogistic) return y == 0.0 || y == 1.0;
  return std::isfinite(y) && y >= 0.0 && std::fabs(y - std::round(y)) <= 1e-9;
}

ModelIndex::ModelIndex(std::vector<int> indices) : idx_(std::move(indices)) {
  for (std::size_t k = 0; k < idx_.size(); ++k) {
    require(idx_[k] >= 1, "model indices are 1-based");
    require(k == 0 || idx_[k] > idx_[k - 1], "model indices must be strictly increasing");
  }
}

ModelIndex ModelIndex::parse(std::string_view text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find_first_of(",;", pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (!tok.empty()) {
      int v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw Error(ErrorKind::kParseError, "bad model index '" + std::string(tok) + "'");
      }
      out.push_back(v);
    }
    pos = end + 1;
  }
  std::sort(out.begin(), out.end());
  return ModelIndex(std::move(out));
}

bool ModelIndex::contains(int j) const {
  return std::binary_search(idx_.begin(), idx_.end(), j);
}

bool ModelIndex::is_subset_of(const ModelIndex& other) const {
  return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end());
}

std::string ModelIndex::to_string() const {
  std::string s;
  for (std::size_t k = 0; k < idx_.size(); ++k) {
    if (k) s += ';';
    s += std::to_string(idx_[k]);
  }
  return s;
}

std::uint64_t ModelIndex::hash() const {
  std::uint64_t h = mix64(0x6A09E667F3BCC908ULL ^ idx_.size());
  for (int j : idx_) h = mix64(h ^ (static_cast<std::uint64_t>(j) * 0x9E3779B97F4A7C15ULL));
  return h;
}

bool canonical_less(const ModelIndex& a, const ModelIndex& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.indices() < b.indices();
}

Dataset::Dataset(Eigen::MatrixXd X, Eigen::VectorXd Y, FamilyKind family)
    : X_(std::move(X)), Y_(std::move(Y)), family_(family) {
  require(X_.rows() >= 1 && X_.cols() >= 1, "dataset needs n >= 1 and p >= 1");
  if (Y_.size() != X_.rows()) {
    throw Error(ErrorKind::kShapeMismatch, "response length " + std::to_string(Y_.size()) +
                                               " vs design rows " + std::to_string(X_.rows()));
  }
  if (!X_.allFinite()) throw Error(ErrorKind::kContractViolation, "design contains non-finite entries");
  for (Eigen::Index i = 0; i < Y_.size(); ++i) {
    if (!family_.admits(Y_[i])) {
      throw Error(ErrorKind::kInvalidResponse, "response row " + std::to_string(i + 1) + " value " +
                                                   std::to_string(Y_[i]) + " not admissible for " +
                                                   std::string(glmev::to_string(family)));
    }
    if (family == FamilyKind::kPoisson) Y_[i] = std::round(Y_[i]);
  }
}

void Dataset::check_model(const ModelIndex& J) const {
  require(J.max_index() <= p(), "model index " + std::to_string(J.max_index()) + " exceeds p=" +
                                    std::to_string(p()));
}

Eigen::MatrixXd Dataset::columns(const ModelIndex& J) const {
  check_model(J);
  Eigen::MatrixXd out(n(), static_cast<Eigen::Index>(J.size()));
  for (std::size_t k = 0; k < J.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = X_.col(J[k] - 1);
  return out;
}

namespace {

void check_conform(const Dataset& ds, const ModelIndex& J, const CoefVector& beta) {
  ds.check_model(J);
  require(beta.size() == static_cast<Eigen::Index>(J.size()),
          "coefficient length " + std::to_string(beta.size()) + " does not match |J|=" +
              std::to_string(J.size()));
  require(beta.allFinite(), "coefficients must be finite");
}

double linear_predictor(const Dataset& ds, const ModelIndex& J, const CoefVector& beta, Eigen::Index i) {
  double eta = 0.0;
  for (std::size_t k = 0; k < J.size(); ++k) eta += ds.X()(i, J[k] - 1) * beta[static_cast<Eigen::Index>(k)];
  return eta;
}

}  // namespace

double log_likelihood(const Dataset& ds, const ModelIndex& J, const CoefVector& beta) {
  check_conform(ds, J, beta);
  const Family& fam = ds.family();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    const double eta = linear_predictor(ds, J, beta, i);
    sum += ds.Y()[i] * eta - fam.cumulant(eta);
  }
  if (!std::isfinite(sum)) throw Error(ErrorKind::kNumeric, "non-finite log-likelihood");
  return sum;
}

Eigen::VectorXd score(const Dataset& ds, const ModelIndex& J, const CoefVector& beta) {
  check_conform(ds, J, beta);
  const Family& fam = ds.family();
  const auto k = static_cast<Eigen::Index>(J.size());
  Eigen::VectorXd s = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    const double resid = ds.Y()[i] - fam.mean(linear_predictor(ds, J, beta, i));
    for (Eigen::Index a = 0; a < k; ++a) s[a] += ds.X()(i, J[a] - 1) * resid;
  }
  if (!s.allFinite()) throw Error(ErrorKind::kNumeric, "non-finite score");
  return s;
}

Eigen::MatrixXd neg_hessian(const Dataset& ds, const ModelIndex& J, const CoefVector& beta) {
  check_conform(ds, J, beta);
  const Family& fam = ds.family();
  const auto k = static_cast<Eigen::Index>(J.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    const double w = fam.variance(linear_predictor(ds, J, beta, i));
    for (Eigen::Index a = 0; a < k; ++a) {
      const double xa = ds.X()(i, J[a] - 1) * w;
      for (Eigen::Index b = 0; b <= a; ++b) H(a, b) += xa * ds.X()(i, J[b] - 1);
    }
  }
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < a; ++b) H(b, a) = H(a, b);
  if (!H.allFinite()) throw Error(ErrorKind::kNumeric, "non-finite Hessian");
  return H;
}

BatchLogLikelihood::BatchLogLikelihood(const Dataset& ds, const ModelIndex& J)
    : XJ_(ds.columns(J)), XtY_(XJ_.transpose() * ds.Y()), family_(ds.family()) {}

void BatchLogLikelihood::evaluate(const Eigen::MatrixXd& betas, Eigen::Ref<Eigen::VectorXd> out) const {
  require(betas.rows() == XJ_.cols(), "batch coefficient rows do not match |J|");
  require(out.size() == betas.cols(), "batch output size mismatch");
  Eigen::MatrixXd eta(XJ_.rows(), betas.cols());
  if (XJ_.cols() == 0) {
    eta.setZero();
  } else {
    eta.noalias() = XJ_ * betas;
  }
  const auto a = eta.array();
  Eigen::RowVectorXd cum;
  if (family_.kind() == FamilyKind::kLogistic) {
    cum = (a.max(0.0) + ((-a.abs()).exp() + 1.0).log()).colwise().sum();
  } else {
    cum = a.exp().colwise().sum();
  }
  if (XJ_.cols() == 0) {
    out = -cum.transpose();
  } else {
    out.noalias() = betas.transpose() * XtY_;
    out -= cum.transpose();
  }
}

}  // namespace glmev
