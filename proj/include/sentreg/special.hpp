#pragma once

// Distribution functions needed for p-values and QQ plotting positions.

namespace sentreg::special {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly
/// in the tail so small values keep their relative precision.
double gamma_q(double a, double x);

/// Pr(X > x) for X ~ chi-square with `df` > 0 degrees of freedom.
double chi2_upper_tail(double x, double df);

double normal_cdf(double z);
/// Pr(|Z| >= |z|).
double normal_two_sided_p(double z);
/// Inverse standard normal CDF on (0, 1). Throws std::domain_error outside.
double normal_quantile(double p);

}  // namespace sentreg::special
