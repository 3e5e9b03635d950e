#pragma once

namespace glmev {

// Regularized incomplete gamma functions P(s, x) and Q(s, x) = 1 - P.
// Series below x = s + 1, Lentz continued fraction above.
double gamma_p(double s, double x);
double gamma_q(double s, double x);

// log Q(s, x), accurate when Q underflows or is tiny.
double log_gamma_q(double s, double x);

// log Gamma(s, x), the upper incomplete gamma function (unregularized).
double log_upper_gamma(double s, double x);

// Chi-square with k degrees of freedom.
double chi_square_cdf(double k, double x);
double log_chi_square_sf(double k, double x);

}  // namespace glmev
