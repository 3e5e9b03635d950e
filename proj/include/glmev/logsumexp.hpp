#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace glmev {

/// Streaming log-sum-exp with second moment.
///
/// Keeps a running maximum m and the rescaled sums S1 = sum exp(x - m),
/// S2 = sum exp(2(x - m)). Rescales when the maximum moves.
class LogSumExp {
 public:
  void add(double x) {
    ++count_;
    if (x == -kInf) return;
    if (x > max_) {
      if (max_ != -kInf) {
        const double r = std::exp(max_ - x);
        s1_ *= r;
        s2_ *= r * r;
      }
      max_ = x;
    }
    const double e = std::exp(x - max_);
    s1_ += e;
    s2_ += e * e;
  }

  std::uint64_t count() const { return count_; }

  // log sum exp(x)
  double log_sum() const { return max_ == -kInf ? -kInf : max_ + std::log(s1_); }

  // log of the sample mean of exp(x)
  double log_mean() const {
    if (count_ == 0 || max_ == -kInf) return -kInf;
    return max_ + std::log(s1_ / static_cast<double>(count_));
  }

  // Delta-method standard error of log_mean(): se(mean w) / mean w.
  double log_mean_std_error() const {
    if (count_ < 2 || max_ == -kInf) return 0.0;
    const double b = static_cast<double>(count_);
    const double m1 = s1_ / b;
    const double m2 = s2_ / b;
    double var = (m2 - m1 * m1) * b / (b - 1.0);
    if (var < 0.0) var = 0.0;
    return std::sqrt(var / b) / m1;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  double max_ = -kInf;
  double s1_ = 0.0;
  double s2_ = 0.0;
  std::uint64_t count_ = 0;
};

}  // namespace glmev
