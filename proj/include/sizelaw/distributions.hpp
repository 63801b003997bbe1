#pragma once

namespace sizelaw {

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double x, double a, double b);

double normal_cdf(double z);

// Student-t cumulative distribution; df > 0 (may be non-integer).
double student_t_cdf(double t, double df);

// Two-sided tail probability P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

// Quantile of the standard normal; p in (0, 1), else DomainError.
double inverse_normal_cdf(double p);

}  // namespace sizelaw
