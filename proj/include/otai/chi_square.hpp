#pragma once

namespace otai::analysis {

/// Regularized lower incomplete gamma P(a, x). Series expansion for
/// x < a + 1, Lentz continued fraction otherwise, both run to 1e-12
/// relative termination. Throws ComputationError on non-convergence.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// directly so deep tails do not cancel to zero.
double regularized_gamma_q(double a, double x);

/// CDF of the chi-square distribution with d degrees of freedom,
/// F(x) = P(d/2, x/2). Requires d >= 1 and x >= 0.
double chi2_cdf(int d, double x);

/// Upper tail of the chi-square distribution, 1 - F(x) without the
/// cancellation loss of computing the difference.
double chi2_sf(int d, double x);

} // namespace otai::analysis
