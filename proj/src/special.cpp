#include "glmev/special.hpp"

#include <cmath>
#include <limits>

#include "glmev/errors.hpp"

namespace glmev {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 10'000;

// log of sum_{n>=0} x^n / ((s+1)...(s+n)); P = exp(-x + s log x - lgamma(s+1)) * sum
double log_series(double s, double x) {
  double term = 1.0;
  double sum = 1.0;
  double ap = s;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return std::log(sum);
}

// log of the continued fraction with Q = exp(-x + s log x - lgamma(s)) * cf
double log_continued_fraction(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::log(h);
}

void check_args(double s, double x) {
  require(s > 0.0 && std::isfinite(s), "incomplete gamma needs s > 0");
  require(x >= 0.0 && !std::isnan(x), "incomplete gamma needs x >= 0");
}

}  // namespace

double gamma_p(double s, double x) {
  check_args(s, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < s + 1.0) return std::exp(-x + s * std::log(x) - std::lgamma(s + 1.0) + log_series(s, x));
  return -std::expm1(log_gamma_q(s, x));
}

double gamma_q(double s, double x) {
  check_args(s, x);
  return std::exp(log_gamma_q(s, x));
}

double log_gamma_q(double s, double x) {
  check_args(s, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  if (x < s + 1.0) {
    const double p = std::exp(-x + s * std::log(x) - std::lgamma(s + 1.0) + log_series(s, x));
    return std::log1p(-p);
  }
  return -x + s * std::log(x) - std::lgamma(s) + log_continued_fraction(s, x);
}

double log_upper_gamma(double s, double x) {
  return std::lgamma(s) + log_gamma_q(s, x);
}

double chi_square_cdf(double k, double x) {
  require(k > 0.0, "chi-square needs k > 0");
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * k, 0.5 * x);
}

double log_chi_square_sf(double k, double x) {
  require(k > 0.0, "chi-square needs k > 0");
  if (x <= 0.0) return 0.0;
  return log_gamma_q(0.5 * k, 0.5 * x);
}

}  // namespace glmev
